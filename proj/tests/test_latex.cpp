#include <doctest.h>

#include <functional>
#include <random>

#include "mathcvt/error.hpp"
#include "mathcvt/latex_parser.hpp"
#include "mathcvt/latex_tokens.hpp"
#include "mathcvt/macro_registry.hpp"

using namespace mathcvt;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::ParseError;
}

MacroRegistry full_registry() {
  MacroRegistry reg = builtin_registry();
  register_table1_macros(reg);
  return reg;
}

const char* kRiemann = "\\zeta(s) = 0 \\Rightarrow \\Re s = \\frac12 \\lor \\Im s=0";

std::vector<Token> no_ws(const std::string& src) {
  std::vector<Token> out;
  for (auto& t : tokenize(src))
    if (t.kind != TokenKind::Whitespace) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("tokenize basics") {
  auto single = tokenize("a");
  REQUIRE(single.size() == 1);
  CHECK(single[0].kind == TokenKind::Identifier);
  CHECK(single[0].lexeme == "a");

  auto frac = tokenize("\\frac12");
  REQUIRE(frac.size() == 3);
  CHECK(frac[0].kind == TokenKind::Command);
  CHECK(frac[0].lexeme == "\\frac");
  CHECK(frac[1].kind == TokenKind::Number);
  CHECK(frac[1].lexeme == "1");
  CHECK(frac[2].lexeme == "2");

  auto zeta = no_ws("\\zeta(s)");
  REQUIRE(zeta.size() == 4);
  CHECK(zeta[0].lexeme == "\\zeta");
  CHECK(zeta[1].kind == TokenKind::OpenFence);
  CHECK(zeta[2].kind == TokenKind::Identifier);
  CHECK(zeta[3].kind == TokenKind::CloseFence);
}

TEST_CASE("tokenize reconstructs the source and keeps positions increasing") {
  for (const char* src : {kRiemann, "a\\,b % trailing\nc", "x_\\text{max} = 3.14", "\\{a,b\\}"}) {
    auto tokens = tokenize(src);
    std::string joined;
    size_t last = 0;
    bool first = true;
    for (auto& t : tokens) {
      joined += t.lexeme;
      if (!first) CHECK(t.position > last);
      last = t.position;
      first = false;
      CHECK(!t.lexeme.empty());
    }
    CHECK(joined == src);
  }
}

TEST_CASE("tokenize normalizes unicode glyphs to command spellings") {
  auto tokens = no_ws("\u03B6(s)");
  CHECK(tokens[0].lexeme == "\\zeta");
  CHECK(tokens[0].kind == TokenKind::Command);
}

TEST_CASE("tokenize errors") {
  CHECK(kind_of([] { tokenize("a } b"); }) == ErrorKind::UnbalancedGroup);
  CHECK(kind_of([] { tokenize("{a"); }) == ErrorKind::UnbalancedGroup);
  CHECK(kind_of([] { tokenize(std::string("a\x01b", 3)); }) == ErrorKind::IllegalCharacter);
}

TEST_CASE("riemann token and depth accounting") {
  MacroRegistry reg = full_registry();
  ExprNode tree = parse_latex(kRiemann, reg);
  CHECK(token_count(tree) == 18);
  CHECK(token_depth(tree) == 2);
}

TEST_CASE("parse small shapes") {
  MacroRegistry reg = full_registry();

  ExprNode x = parse_latex("x", reg);
  CHECK(x.is_leaf());
  CHECK(token_count(x) == 1);
  CHECK(token_depth(x) == 1);

  ExprNode sub = parse_latex("p_i", reg);
  CHECK(sub.kind == NodeKind::Script);
  REQUIRE(sub.children.size() == 2);
  CHECK(sub.children[0].label == "p");
  CHECK(sub.children[1].label == "i");

  ExprNode frac = parse_latex("\\frac{a}{b}", reg);
  CHECK(frac.kind == NodeKind::Fraction);
  CHECK(frac.children.size() == 2);
}

TEST_CASE("scripts normalize to one order") {
  MacroRegistry reg = full_registry();
  ExprNode a = parse_latex("x^a_b", reg);
  ExprNode b = parse_latex("x_b^a", reg);
  CHECK(a == b);
  CHECK(*a.attr("script") == "subsup");
}

TEST_CASE("operatorname fuses multi-character identifiers") {
  MacroRegistry reg = full_registry();
  ExprNode fused = parse_latex("\\operatorname{sinc}", reg);
  CHECK(fused.is_leaf());
  CHECK(fused.label == "sinc");
  CHECK(fused.kind == NodeKind::Identifier);

  ExprNode split = parse_latex("ab", reg);
  REQUIRE(split.children.size() == 2);
  CHECK(split.children[0].label == "a");
  CHECK(split.children[1].label == "b");
}

TEST_CASE("parse errors") {
  MacroRegistry reg = full_registry();
  CHECK(kind_of([&] { parse_latex("\\nosuchmacro x", reg); }) == ErrorKind::UnknownMacro);
  CHECK(kind_of([&] { parse_latex("\\frac{1}", reg); }) == ErrorKind::ArityError);
  CHECK(kind_of([&] { parse_latex("x^", reg); }) == ErrorKind::ArityError);
  CHECK(kind_of([&] { parse_latex("x^a^b", reg); }) == ErrorKind::ParseError);
}

TEST_CASE("strip_formatting removes display-only markup") {
  CHECK(strip_formatting("a\\,b") == "ab");
  CHECK(strip_formatting("E=mc^2") == "E=mc^2");
  CHECK(strip_formatting("x \\! y") == "x y");
  CHECK(strip_formatting("\\left( a \\right)") == "( a )");
  CHECK(strip_formatting("a % comment\n+ b") == "a + b");
}

TEST_CASE("strip_formatting is idempotent and only drops whitespace-class tokens") {
  for (const char* src :
       {"a\\,b", "x \\! y", kRiemann, "\\Big( \\frac{1}{2} \\Big)", "a %x\nb"}) {
    std::string once = strip_formatting(src);
    CHECK(strip_formatting(once) == once);
    // surviving tokens equal the originals minus whitespace/scaling commands
    auto orig = no_ws(src);
    auto stripped = no_ws(once);
    std::vector<std::string> orig_lex, stripped_lex;
    for (auto& t : orig)
      if (!(t.kind == TokenKind::Command &&
            (t.lexeme == "\\left" || t.lexeme == "\\right" || t.lexeme == "\\Big" ||
             t.lexeme == "\\big" || t.lexeme == "\\bigg" || t.lexeme == "\\Bigg")))
        orig_lex.push_back(t.lexeme);
    for (auto& t : stripped) stripped_lex.push_back(t.lexeme);
    CHECK(orig_lex == stripped_lex);
  }
}

TEST_CASE("table1 macro registration") {
  MacroRegistry reg;
  register_table1_macros(reg);
  CHECK(reg.size() == 6);
  const MacroDef* comm = reg.find("\\commutator");
  REQUIRE(comm != nullptr);
  REQUIRE(comm->annotation.has_value());
  CHECK(comm->annotation->cd == "wikidata");
  CHECK(comm->annotation->symbol_id == "Q2989763");
  CHECK(reg.find("\\tensor")->annotation->symbol_id == "Q188524");
  CHECK(reg.find("\\adjoint")->annotation->symbol_id == "Q2051983");
  CHECK(reg.find("\\transform")->annotation->symbol_id == "Q12202238");
  CHECK(reg.find("\\degreeof")->annotation->symbol_id == "Q28390");
  CHECK(reg.find("\\contraction")->annotation->symbol_id == "Q5165685");

  CHECK(kind_of([&] { register_table1_macros(reg); }) == ErrorKind::DuplicateMacro);
}

TEST_CASE("commutator macro parse carries its annotation") {
  MacroRegistry reg = full_registry();
  ExprNode tree = parse_latex("\\commutator{a}{b}", reg);
  REQUIRE(tree.attr("macro") != nullptr);
  CHECK(*tree.attr("m_symbol") == "Q2989763");
  // rendering: [ a , b ]
  auto leaves = leaf_labels(tree);
  REQUIRE(leaves.size() == 5);
  CHECK(leaves.front() == "[");
  CHECK(leaves.back() == "]");
}

TEST_CASE("registry file loading and rewrite validation") {
  MacroRegistry reg = full_registry();
  parse_registry_text(
      reg, "\\erf\t0:0:1\tcall\terf\tfunction\tlocal\terror-function\terror function\n", "test");
  ExprNode tree = parse_latex("\\erf@{x}", reg);
  CHECK(*tree.attr("m_symbol") == "error-function");

  MacroRegistry bad;
  CHECK(kind_of([&] {
          parse_registry_text(
              bad, "\\sq\t1:0:0\tcall\tsq\tfunction\tlocal\tsq\tsquare\tpower(?2, 2)\n", "test");
        }) == ErrorKind::FormatError);  // slot 2 out of range
}

TEST_CASE("print/parse fixed point") {
  MacroRegistry reg = full_registry();
  for (const char* src :
       {kRiemann, "x_\\text{max} = \\frac{x_1 + x_2}{2}", "\\commutator{a}{b} = a b - b a",
        "\\tensor{T}{\\mu}{\\nu}", "\\JacobiP{\\alpha}{\\beta}{n}@{x}",
        "\\LegendreQ[\\mu]{\\nu}@{z}", "\\sqrt[3]{x+1}", "a \\equiv b \\pmod{n}",
        "|x| = \\begin{cases} x & x \\geq 0 \\\\ -x & x < 0 \\end{cases}",
        "E = mc^2 \\tag{\\star}", "\\operatorname{sinc} x", "x'", "3.14 + 2",
        "\\commutator{\\commutator{a}{b}}{c}", "\\adjoint{\\frac{a}{b}}"}) {
    ExprNode first = parse_latex(src, reg);
    std::string printed = print_latex(first);
    CAPTURE(src);
    CAPTURE(printed);
    ExprNode second = parse_latex(printed, reg);
    CHECK(first == second);
  }
}

TEST_CASE("print/parse fixed point on generated expressions") {
  MacroRegistry reg = full_registry();
  std::mt19937 rng(8844);
  std::uniform_int_distribution<int> pick(0, 11);
  std::uniform_int_distribution<int> op_pick(0, 5);
  static const char* ops[] = {" + ", " - ", " = ", " \\cdot ", " \\lor ", " < "};

  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    if (depth <= 0) {
      static const char* atoms[] = {"x", "y", "2", "\\alpha", "\\infty", "0"};
      return atoms[pick(rng) % 6];
    }
    switch (pick(rng)) {
      case 0: return "\\frac{" + gen(depth - 1) + "}{" + gen(depth - 1) + "}";
      case 1: return "{" + gen(depth - 1) + "}^{" + gen(depth - 1) + "}";
      case 2: return "{" + gen(depth - 1) + "}_{" + gen(depth - 1) + "}";
      case 3: return "(" + gen(depth - 1) + ")";
      case 4: return "\\sqrt{" + gen(depth - 1) + "}";
      case 5: return "\\commutator{" + gen(depth - 1) + "}{" + gen(depth - 1) + "}";
      case 6: return "\\operatorname{abc}" ;
      case 7: return "|" + gen(depth - 1) + "|";
      case 8: return "\\adjoint{" + gen(depth - 1) + "}";
      default: return gen(depth - 1) + ops[op_pick(rng)] + gen(depth - 1);
    }
  };

  for (int i = 0; i < 120; ++i) {
    std::string tex = gen(3);
    CAPTURE(tex);
    ExprNode first = parse_latex(tex, reg);
    ExprNode second = parse_latex(print_latex(first), reg);
    CHECK(first == second);
  }
}

TEST_CASE("hostile TeX raises errors instead of crashing") {
  MacroRegistry reg = full_registry();
  std::string deep;
  for (int i = 0; i < 2000; ++i) deep += "{";
  deep += "x";
  for (int i = 0; i < 2000; ++i) deep += "}";
  try {
    parse_latex(deep, reg);  // deep nesting either parses or errors cleanly
  } catch (const Error&) {
  }

  std::mt19937 rng(4096);
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> ch(32, 126);
  for (int iter = 0; iter < 500; ++iter) {
    std::string junk;
    int n = len(rng);
    for (int i = 0; i < n; ++i) junk += static_cast<char>(ch(rng));
    try {
      parse_latex(junk, reg);
    } catch (const Error&) {
    }
  }
  CHECK(true);  // reaching here means no crash
}
