#include <doctest.h>

#include <functional>

#include "mathcvt/contentizer.hpp"
#include "mathcvt/error.hpp"
#include "mathcvt/fixture.hpp"
#include "mathcvt/latex_parser.hpp"
#include "mathcvt/term.hpp"

using namespace mathcvt;

namespace {

const Pipeline& pipe() {
  static Pipeline p = fixture_pipeline();
  return p;
}

ExprNode pres(const std::string& tex) { return parse_latex(tex, pipe().registry()); }

ExprNode content_of(const std::string& tex, RefinementConfig cfg = {},
                    const std::string& context = "") {
  ExprNode p = pres(tex);
  PipelineOptions opts;
  opts.refine = cfg;
  ReadingMap readings = pipe().readings_for(p, tex, context, opts);
  return contentize(p, readings, cfg);
}

// label(children) skeleton, attrs ignored
std::string skeleton(const ExprNode& t) { return print_term(t); }

const char* kRiemann = "\\zeta(s) = 0 \\Rightarrow \\Re s = \\frac12 \\lor \\Im s=0";

}  // namespace

TEST_CASE("riemann content accounting") {
  ExprNode c = content_of(kRiemann);
  CHECK(token_count(c) == 16);
  CHECK(token_depth(c) == 5);
  CHECK(c.label == "implies");
}

TEST_CASE("single identifier stays a leaf") {
  ExprNode c = content_of("x");
  CHECK(c.is_leaf());
  CHECK(c.label == "x");
}

TEST_CASE("function role decides apply versus times") {
  ExprNode p = pres("f(x+y)");
  RefinementConfig cfg;

  ReadingMap as_function;
  as_function[p.children[0].id] = {Reading{SymbolRole::Function, std::nullopt}};
  ExprNode apply_form = contentize(p, as_function, cfg);
  CHECK(skeleton(apply_form) == "f(plus(x,y))");

  ReadingMap as_identifier;
  as_identifier[p.children[0].id] = {Reading{SymbolRole::Identifier, std::nullopt}};
  ExprNode times_form = contentize(p, as_identifier, cfg);
  CHECK(skeleton(times_form) == "times(f,plus(x,y))");
}

TEST_CASE("power rule") {
  CHECK(skeleton(content_of("x^2")) == "power(x,2)");
  CHECK(skeleton(content_of("x")) == "x");

  RefinementConfig no_power;
  no_power.power_rule = false;
  CHECK(skeleton(content_of("x^2", no_power)) == "script(x,2)");

  // contraction macro head, not a power
  ExprNode contraction = content_of("\\contraction{g}{3}");
  CHECK(contraction.label == "Q5165685");
  CHECK(skeleton(contraction) == "Q5165685(g,3)");
}

TEST_CASE("subscript rule") {
  CHECK(skeleton(content_of("p_i")) == "p(i)");
  ExprNode fused = content_of("x_\\text{max}");
  CHECK(fused.is_leaf());
  CHECK(fused.label == "x_max");
  CHECK(skeleton(content_of("b")) == "b");

  RefinementConfig no_sub;
  no_sub.subscript_rule = false;
  CHECK(skeleton(content_of("p_i", no_sub)) == "script(p,i)");
}

TEST_CASE("einstein index detection") {
  ExprNode p1 = pres("x^a y_a");
  std::set<int> marks = detect_einstein(p1);
  CHECK(marks.size() == 2);
  for (int id : marks) {
    const ExprNode* n = find_by_id(p1, id);
    REQUIRE(n != nullptr);
    CHECK(n->label == "a");
  }

  CHECK(detect_einstein(pres("x^2")).empty());
  CHECK(detect_einstein(pres("x^a y_b")).empty());
  CHECK(detect_einstein(pres("x^a + y_a")).empty());  // different terms

  // marked indices become parameters, not powers
  CHECK(skeleton(content_of("x^a y_a")) == "times(x(a),y(a))");
  CHECK(skeleton(content_of("x^a y_b")) == "times(power(x,a),y(b))");
}

TEST_CASE("einstein toggle changes nothing without index pairs") {
  RefinementConfig off;
  off.einstein_detection = false;
  for (const char* tex : {"x^2", "a+b", "p_i q_j", "\\frac{u}{v}", "x^a y_b"}) {
    CHECK(content_of(tex) == content_of(tex, off));
  }
}

TEST_CASE("invisible operator disambiguation") {
  ExprNode re = pres("\\Re s");
  PipelineOptions opts;
  ReadingMap readings = pipe().readings_for(re, "\\Re s", "", opts);
  ExprNode tagged = disambiguate_invisible(re, readings);
  CHECK(*tagged.children[0].attr("invisible") == "apply");

  ExprNode twox = disambiguate_invisible(pres("2x"), {});
  CHECK(*twox.children[0].attr("invisible") == "times");

  ExprNode fa = disambiguate_invisible(pres("F a"), {});
  CHECK(*fa.children[0].attr("invisible") == "times");

  CHECK(skeleton(content_of("\\Re s")) == "real-part(s)");
  CHECK(skeleton(content_of("2x")) == "times(2,x)");
  CHECK(skeleton(content_of("F a")) == "times(F,a)");
}

TEST_CASE("special heads distinguish bracket semantics") {
  ExprNode comm = content_of("\\commutator{a}{b}");
  ExprNode anti = content_of("\\anticommutator{a}{b}");
  ExprNode interval = content_of("[a,b]");
  CHECK(comm.label == "Q2989763");
  CHECK(anti.label == "anticommutator");
  CHECK(interval.label == "interval");
  CHECK(!same_shape(comm, anti));
  CHECK(!same_shape(comm, interval));
  CHECK(skeleton(comm) == "Q2989763(a,b)");

  ExprNode set = content_of("\\{a,b\\}");
  CHECK(set.label == "set");
}

TEST_CASE("equation labels are dropped") {
  ExprNode c = content_of("E = mc^2 \\tag{\\star}");
  CHECK(c.label == "eq");
  for (const ExprNode* n : preorder(c)) CHECK(n->label.find("star") == std::string::npos);
  CHECK(c == content_of("E = mc^2"));
}

TEST_CASE("degree glyph becomes a functional head") {
  ExprNode deg = content_of("x^\\circ");
  CHECK(deg.label == "Q28390");
  CHECK(skeleton(deg) == "Q28390(x)");
  CHECK(content_of("\\degreeof{x}").label == "Q28390");
}

TEST_CASE("modulus becomes a root constraint") {
  ExprNode c = content_of("a \\equiv b \\pmod{n}");
  CHECK(c.label == "equivalent");
  REQUIRE(c.attr("constraint") != nullptr);
  CHECK(*c.attr("constraint") == "mod(n)");
  CHECK(skeleton(c) == "equivalent(a,b)");
}

TEST_CASE("expression lists keep the first sub-expression") {
  ExprNode c = content_of("a = b, c = d");
  CHECK(skeleton(c) == "eq(a,b)");
}

TEST_CASE("multi-case formulae branch per case") {
  ExprNode c = content_of("\\begin{cases} x & x \\geq 0 \\\\ -x & x < 0 \\end{cases}");
  CHECK(c.label == "cases");
  REQUIRE(c.children.size() == 2);
  CHECK(c.children[0].label == "case");
  CHECK(skeleton(c.children[0]) == "case(x,geq(x,0))");
  CHECK(skeleton(c.children[1]) == "case(minus(x),lt(x,0))");
}

TEST_CASE("precedence and grouping") {
  CHECK(skeleton(content_of("a + b + c")) == "plus(a,b,c)");
  CHECK(skeleton(content_of("a + b - c")) == "minus(plus(a,b),c)");
  CHECK(skeleton(content_of("a(b+d)/c")) == "divide(times(a,plus(b,d)),c)");
  CHECK(skeleton(content_of("a(\\frac{b}{c} + \\frac{d}{c})")) ==
        "times(a,plus(divide(b,c),divide(d,c)))");
  CHECK(skeleton(content_of("n!")) == "factorial(n)");
  CHECK(skeleton(content_of("\\sqrt{x}")) == "root(x)");
  // junctions share one level and fold left; relations bind tighter
  CHECK(skeleton(content_of("p \\lor q \\land r = s")) == "and(or(p,q),eq(r,s))");
  CHECK(skeleton(content_of("p \\lor q \\lor r")) == "or(p,q,r)");
}

TEST_CASE("determinism") {
  for (int i = 0; i < 3; ++i) CHECK(content_of(kRiemann) == content_of(kRiemann));
}

TEST_CASE("content leaves come from presentation leaves") {
  for (const char* tex : {kRiemann, "a(b+d)/c", "\\commutator{a}{b} = a b - b a", "z = x^a y_a"}) {
    ExprNode p = pres(tex);
    ExprNode c = content_of(tex);
    auto pres_leaves = symbol_leaves(p);
    for (const std::string& leaf : symbol_leaves(c)) {
      bool found = std::find(pres_leaves.begin(), pres_leaves.end(), leaf) != pres_leaves.end();
      CAPTURE(tex);
      CAPTURE(leaf);
      CHECK(found);
    }
  }
}

TEST_CASE("conflicting roles with every refinement disabled is an error") {
  ExprNode p = pres("E x");
  ReadingMap conflicted;
  conflicted[p.children[0].id] = {Reading{SymbolRole::Identifier, std::nullopt},
                                  Reading{SymbolRole::Function, std::nullopt}};
  RefinementConfig off = RefinementConfig::all_off();
  CHECK_THROWS_AS(contentize(p, conflicted, off), Error);
  try {
    contentize(p, conflicted, off);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AmbiguityUnresolved);
  }
  // with refinements on the default reading wins instead
  RefinementConfig on;
  CHECK(skeleton(contentize(p, conflicted, on)) == "times(E,x)");
}

TEST_CASE("standalone refinement passes") {
  // raw script nodes as a converter with refinements off would leave them
  ExprNode script = parse_term("script(x,2)");
  script.attrs["script"] = "sup";
  ExprNode powered = apply_power_rule(script);
  CHECK(print_term(powered) == "power(x,2)");

  ExprNode sub = parse_term("script(p,i)");
  sub.attrs["script"] = "sub";
  CHECK(print_term(apply_subscript_rule(sub)) == "p(i)");

  ExprNode dag("script", NodeKind::Command);
  dag.attrs["script"] = "sup";
  dag.children.emplace_back("A", NodeKind::Identifier);
  dag.children.emplace_back("\\dagger", NodeKind::Operator);
  ExprNode lifted = apply_special_heads(dag);
  CHECK(print_term(lifted) == "adjoint(A)");
  // idempotent
  CHECK(apply_special_heads(lifted) == lifted);
  CHECK(apply_power_rule(powered) == powered);
}

TEST_CASE("difference operator applies to its variable") {
  CHECK(skeleton(content_of("\\Delta x")) == "\\Delta(x)");
}
