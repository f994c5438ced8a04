#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mathcvt/expr_tree.hpp"
#include "mathcvt/lexicon.hpp"

namespace mathcvt {

/// How a macro's arguments render and which tree shape it produces.
enum class MacroShape {
  Symbol,           // bare token (\zeta, \leq, \infty)
  Fraction,         // \frac{a}{b}, \sfrac{a}{b}
  Radical,          // \sqrt[n]{x}
  OperatorName,     // \operatorname{sinc} -> one identifier token
  TextMode,         // \text{max} -> text token
  Pmod,             // \pmod{n}
  Tag,              // \tag{..} / \label{..} equation labels
  FencedPair,       // [x,y] or {x,y} with head semantics
  ScriptUpper,      // x^<glyph> postfix operation
  ScriptUpperLower, // x^{u}_{l} index pair
  ParenUpper,       // x^{(d)} parenthesized upper argument
  Call,             // H(z) head-with-parenthesized-arguments
  SubCall,          // J_{v}(z)
  SupSubCall,       // Q^{u}_{v}(z)
  PairSupSubCall,   // P^{(a,b)}_{n}(x)
};

struct MacroDef {
  std::string name;       // including backslash
  int arity = 0;          // mandatory arguments
  int optional_args = 0;  // [..] arguments
  int at_args = 0;        // arguments after the '@' separator
  MacroShape shape = MacroShape::Symbol;
  NodeKind token_kind = NodeKind::Command;  // for Symbol shape
  std::string display;    // rendered head / fence pair / postfix glyph
  std::optional<SemanticAnnotation> annotation;
  std::optional<SymbolRole> role;
  std::string rewrite;    // optional content term template using ?1..?n slots

  int total_args() const { return arity + optional_args + at_args; }
};

/// Immutable-after-construction macro table shared by parser instances.
class MacroRegistry {
public:
  /// Throws DuplicateMacro when the name is already registered, FormatError
  /// when a rewrite template references a slot outside 1..total_args.
  void add(MacroDef def);

  const MacroDef* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  size_t size() const { return defs_.size(); }

  std::vector<std::string> names() const;

private:
  std::map<std::string, MacroDef> defs_;
};

/// Core macro set: amsmath-style symbols and layout commands, common function
/// names, and the DLMF-style semantic macros (\EulerGamma, \BesselJ,
/// \LegendreQ, \JacobiP).
MacroRegistry builtin_registry();

/// Adds the six special content macros (commutator, tensor, adjoint,
/// transformation, degree, contraction) with their Wikidata bindings.
MacroRegistry& register_table1_macros(MacroRegistry& registry);

/// Loads extension macros from a tab-separated file:
///   name <TAB> argspec <TAB> shape <TAB> display <TAB> role <TAB> cd
///        <TAB> symbol_id <TAB> label [<TAB> rewrite]
/// argspec is arity[:optional[:at]], shape one of symbol|call|subcall.
void load_registry_file(MacroRegistry& registry, const std::string& path);
void parse_registry_text(MacroRegistry& registry, const std::string& text,
                         const std::string& origin = "<string>");

}  // namespace mathcvt
