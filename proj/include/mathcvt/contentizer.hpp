#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "mathcvt/expr_tree.hpp"
#include "mathcvt/lexicon.hpp"

namespace mathcvt {

/// A resolved reading of one presentation token.
struct Reading {
  SymbolRole role = SymbolRole::Identifier;
  std::optional<SemanticAnnotation> annotation;
};

/// Raw readings per presentation node id. Multiple readings mean the token is
/// ambiguous; the contentizer resolves (or reports) the conflict.
using ReadingMap = std::map<int, std::vector<Reading>>;

struct RefinementConfig {
  bool power_rule = true;
  bool subscript_rule = true;
  bool function_apply_rule = true;
  bool einstein_detection = true;

  static RefinementConfig all_on() { return {}; }
  static RefinementConfig all_off() { return {false, false, false, false}; }
  bool any() const { return power_rule || subscript_rule || function_apply_rule || einstein_detection; }
};

/// Transforms a presentation tree into a content tree (head-labeled operator
/// applications). Fences denoting grouping dissolve; fences denoting function
/// application become applications; equation labels are dropped and trailing
/// \pmod constraints move into a `constraint` attribute on the root. Content
/// nodes carry attr srcid referencing the presentation node they came from.
/// Throws AmbiguityUnresolved when every refinement is disabled and a token
/// has conflicting roles.
ExprNode contentize(const ExprNode& presentation, const ReadingMap& readings,
                    const RefinementConfig& cfg);

/// Ids of index identifiers that appear exactly once as a superscript and
/// once as a subscript within one multiplicative term.
std::set<int> detect_einstein(const ExprNode& presentation);

/// Copy of the presentation tree where each token adjacent to a following
/// token with no explicit operator carries attr invisible="apply"|"times".
ExprNode disambiguate_invisible(const ExprNode& presentation, const ReadingMap& readings);

/// Superscripts become power heads, except Einstein-marked indices (which
/// become parameter children) and postfix operation glyphs.
ExprNode apply_power_rule(const ExprNode& content);

/// Math-mode subscripts become parameter children of their base; text-mode
/// subscripts fuse with the base into one compound identifier.
ExprNode apply_subscript_rule(const ExprNode& content);

/// Lifts postfix glyph superscripts (dagger, prime, degree ring) into
/// functional operation heads. Macro-defined heads and multi-case branches
/// are already in head form when this runs; the pass is idempotent.
ExprNode apply_special_heads(const ExprNode& content);

}  // namespace mathcvt
