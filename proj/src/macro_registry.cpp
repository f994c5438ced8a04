#include "mathcvt/macro_registry.hpp"

#include <fstream>
#include <sstream>

#include "mathcvt/error.hpp"
#include "mathcvt/term.hpp"

namespace mathcvt {

namespace {

void validate_rewrite(const MacroDef& def) {
  if (def.rewrite.empty()) return;
  ExprNode tpl = parse_term(def.rewrite, /*allow_vars=*/true);
  for (const ExprNode* n : preorder(tpl)) {
    if (!n->has_attr("var")) continue;
    const std::string slot = n->label.substr(1);
    int idx = 0;
    try {
      idx = std::stoi(slot);
    } catch (...) {
      raise(ErrorKind::FormatError, def.name + ": rewrite slot must be numeric: " + n->label);
    }
    if (idx < 1 || idx > def.total_args())
      raise(ErrorKind::FormatError,
            def.name + ": rewrite references slot " + slot + " outside 1.." +
                std::to_string(def.total_args()));
  }
}

MacroDef symbol(const std::string& name, NodeKind kind) {
  MacroDef d;
  d.name = name;
  d.shape = MacroShape::Symbol;
  d.token_kind = kind;
  return d;
}

MacroDef function_symbol(const std::string& name) {
  MacroDef d = symbol(name, NodeKind::Command);
  d.role = SymbolRole::Function;
  return d;
}

}  // namespace

void MacroRegistry::add(MacroDef def) {
  if (defs_.count(def.name))
    raise(ErrorKind::DuplicateMacro, "macro already registered: " + def.name);
  if (def.annotation) {
    if (auto err = def.annotation->validate())
      raise(ErrorKind::FormatError, def.name + ": " + *err);
  }
  validate_rewrite(def);
  defs_.emplace(def.name, std::move(def));
}

const MacroDef* MacroRegistry::find(const std::string& name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

std::vector<std::string> MacroRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(defs_.size());
  for (const auto& [name, _] : defs_) out.push_back(name);
  return out;
}

MacroRegistry builtin_registry() {
  MacroRegistry reg;

  static const char* greek[] = {
      "\\alpha", "\\beta", "\\gamma", "\\delta", "\\epsilon", "\\zeta", "\\eta",
      "\\theta", "\\iota", "\\kappa", "\\lambda", "\\mu", "\\nu", "\\xi", "\\pi",
      "\\rho", "\\sigma", "\\tau", "\\upsilon", "\\phi", "\\chi", "\\psi",
      "\\omega", "\\Gamma", "\\Theta", "\\Lambda", "\\Xi", "\\Pi",
      "\\Sigma", "\\Upsilon", "\\Phi", "\\Psi", "\\Omega", "\\ell", "\\hbar",
      "\\infty", "\\partial", "\\nabla", "\\Re", "\\Im", "\\imath", "\\jmath"};
  for (const char* name : greek) reg.add(symbol(name, NodeKind::Command));

  static const char* operators[] = {
      "\\cdot", "\\times", "\\div", "\\pm", "\\mp", "\\ast", "\\star", "\\oplus",
      "\\otimes", "\\circ", "\\bullet", "\\cap", "\\cup", "\\setminus", "\\wedge",
      "\\vee", "\\land", "\\lor", "\\neg", "\\dagger", "\\prime", "\\backslash"};
  for (const char* name : operators) reg.add(symbol(name, NodeKind::Operator));

  static const char* relations[] = {
      "\\leq", "\\geq", "\\neq", "\\approx", "\\equiv", "\\sim", "\\simeq",
      "\\cong", "\\propto", "\\subset", "\\subseteq", "\\supset", "\\supseteq",
      "\\in", "\\notin", "\\ni", "\\mid", "\\parallel", "\\perp",
      "\\Rightarrow", "\\Leftarrow", "\\Leftrightarrow", "\\rightarrow", "\\to",
      "\\leftarrow", "\\mapsto", "\\implies", "\\iff"};
  for (const char* name : relations) reg.add(symbol(name, NodeKind::Relation));

  static const char* functions[] = {"\\Delta", "\\sin",  "\\cos",  "\\tan", "\\cot", "\\sec",
                                    "\\csc",  "\\log",  "\\ln",  "\\lg",  "\\exp",
                                    "\\sinh", "\\cosh", "\\tanh", "\\arcsin",
                                    "\\arccos", "\\arctan", "\\det", "\\dim",
                                    "\\max", "\\min", "\\sup", "\\inf", "\\gcd",
                                    "\\deg", "\\arg", "\\lim"};
  for (const char* name : functions) reg.add(function_symbol(name));

  static const char* bigops[] = {"\\sum", "\\prod", "\\int", "\\oint", "\\bigcup",
                                 "\\bigcap"};
  for (const char* name : bigops) reg.add(symbol(name, NodeKind::Operator));

  {
    MacroDef frac = symbol("\\frac", NodeKind::Command);
    frac.arity = 2;
    frac.shape = MacroShape::Fraction;
    reg.add(frac);
    MacroDef sfrac = frac;
    sfrac.name = "\\sfrac";
    reg.add(sfrac);
    MacroDef dfrac = frac;
    dfrac.name = "\\dfrac";
    reg.add(dfrac);
  }
  {
    MacroDef sqrt = symbol("\\sqrt", NodeKind::Command);
    sqrt.arity = 1;
    sqrt.optional_args = 1;
    sqrt.shape = MacroShape::Radical;
    reg.add(sqrt);
  }
  {
    MacroDef opname = symbol("\\operatorname", NodeKind::Command);
    opname.arity = 1;
    opname.shape = MacroShape::OperatorName;
    opname.role = SymbolRole::Function;
    reg.add(opname);
  }
  for (const char* name : {"\\text", "\\mathrm", "\\mathbf", "\\mathit", "\\mathbb",
                           "\\mathcal", "\\mathsf"}) {
    MacroDef text = symbol(name, NodeKind::Command);
    text.arity = 1;
    text.shape = MacroShape::TextMode;
    reg.add(text);
  }
  {
    MacroDef pmod = symbol("\\pmod", NodeKind::Command);
    pmod.arity = 1;
    pmod.shape = MacroShape::Pmod;
    reg.add(pmod);
  }
  for (const char* name : {"\\tag", "\\label"}) {
    MacroDef tag = symbol(name, NodeKind::Command);
    tag.arity = 1;
    tag.shape = MacroShape::Tag;
    reg.add(tag);
  }

  // Bracket-pair extension macro complementing the special content set below.
  {
    MacroDef anti = symbol("\\anticommutator", NodeKind::Command);
    anti.arity = 2;
    anti.shape = MacroShape::FencedPair;
    anti.display = "\\{\\}";
    anti.annotation = SemanticAnnotation{"local", "anticommutator", "anticommutator", ""};
    anti.role = SymbolRole::Function;
    reg.add(anti);
  }

  // DLMF-style semantic macros.
  {
    MacroDef d = symbol("\\EulerGamma", NodeKind::Command);
    d.at_args = 1;
    d.shape = MacroShape::Call;
    d.display = "\\Gamma";
    d.annotation = SemanticAnnotation{"wikidata", "Q190573", "gamma function", ""};
    d.role = SymbolRole::Function;
    reg.add(d);
  }
  {
    MacroDef d = symbol("\\BesselJ", NodeKind::Command);
    d.arity = 1;
    d.at_args = 1;
    d.shape = MacroShape::SubCall;
    d.display = "J";
    d.annotation =
        SemanticAnnotation{"local", "bessel-j", "Bessel function of the first kind", ""};
    d.role = SymbolRole::Function;
    reg.add(d);
  }
  {
    MacroDef d = symbol("\\LegendreQ", NodeKind::Command);
    d.arity = 1;
    d.optional_args = 1;
    d.at_args = 1;
    d.shape = MacroShape::SupSubCall;
    d.display = "Q";
    d.annotation =
        SemanticAnnotation{"local", "legendre-q", "associated Legendre function of the second kind", ""};
    d.role = SymbolRole::Function;
    reg.add(d);
  }
  {
    MacroDef d = symbol("\\JacobiP", NodeKind::Command);
    d.arity = 3;
    d.at_args = 1;
    d.shape = MacroShape::PairSupSubCall;
    d.display = "P";
    d.annotation = SemanticAnnotation{"local", "jacobi-p", "Jacobi polynomial", ""};
    d.role = SymbolRole::Function;
    reg.add(d);
  }

  return reg;
}

MacroRegistry& register_table1_macros(MacroRegistry& reg) {
  auto make = [](const char* name, int arity, MacroShape shape, const char* display,
                 const char* qid, const char* label) {
    MacroDef d;
    d.name = name;
    d.arity = arity;
    d.shape = shape;
    d.display = display;
    d.token_kind = NodeKind::Command;
    d.annotation = SemanticAnnotation{"wikidata", qid, label, ""};
    d.role = SymbolRole::Function;
    return d;
  };
  reg.add(make("\\commutator", 2, MacroShape::FencedPair, "[]", "Q2989763", "commutator"));
  reg.add(make("\\tensor", 3, MacroShape::ScriptUpperLower, "", "Q188524", "tensor"));
  reg.add(make("\\adjoint", 1, MacroShape::ScriptUpper, "\\dagger", "Q2051983", "adjoint"));
  reg.add(make("\\transform", 1, MacroShape::ScriptUpper, "\\prime", "Q12202238", "transformation"));
  reg.add(make("\\degreeof", 1, MacroShape::ScriptUpper, "\\circ", "Q28390", "degree"));
  reg.add(make("\\contraction", 2, MacroShape::ParenUpper, "", "Q5165685", "contraction"));
  return reg;
}

void parse_registry_text(MacroRegistry& reg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    size_t start = 0;
    for (;;) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        f.push_back(line.substr(start));
        break;
      }
      f.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    auto fail = [&](const std::string& msg) {
      raise(ErrorKind::FormatError, origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    if (f.size() < 8) fail("expected at least 8 tab-separated fields");
    MacroDef d;
    d.name = f[0];
    if (d.name.empty() || d.name[0] != '\\') fail("macro name must start with backslash");
    {
      int slots[3] = {0, 0, 0};
      int i = 0;
      std::istringstream spec(f[1]);
      std::string part;
      while (std::getline(spec, part, ':') && i < 3) slots[i++] = std::stoi(part);
      d.arity = slots[0];
      d.optional_args = slots[1];
      d.at_args = slots[2];
    }
    if (f[2] == "symbol")
      d.shape = MacroShape::Symbol;
    else if (f[2] == "call")
      d.shape = MacroShape::Call;
    else if (f[2] == "subcall")
      d.shape = MacroShape::SubCall;
    else
      fail("unknown shape '" + f[2] + "'");
    d.display = f[3];
    if (!f[4].empty()) {
      auto role = role_from_string(f[4]);
      if (!role) fail("unknown role '" + f[4] + "'");
      d.role = *role;
    }
    if (!f[5].empty()) d.annotation = SemanticAnnotation{f[5], f[6], f[7], ""};
    if (f.size() > 8) d.rewrite = f[8];
    try {
      reg.add(std::move(d));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DuplicateMacro) throw;
      fail(e.what());
    }
  }
}

void load_registry_file(MacroRegistry& reg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoError, "cannot open registry file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  parse_registry_text(reg, buf.str(), path);
}

}  // namespace mathcvt
