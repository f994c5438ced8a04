#include <doctest.h>

#include <functional>

#include "mathcvt/error.hpp"
#include "mathcvt/fixture.hpp"
#include "mathcvt/gold.hpp"
#include "mathcvt/latex_parser.hpp"
#include "mathcvt/pipeline.hpp"
#include "mathcvt/ted.hpp"
#include "mathcvt/mathml.hpp"
#include "mathcvt/term.hpp"
#include "mathcvt/xml.hpp"

#include <random>

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

std::vector<GoldEntry> all_fixture_entries() {
  static std::vector<GoldEntry> entries = [] {
    Pipeline pipeline = fixture_pipeline();
    auto files = generate_fixtures();
    std::vector<GoldEntry> out = parse_gold(files.at("gold.jsonl"), pipeline.registry());
    for (auto& e : parse_gold(files.at("gold_functions.jsonl"), pipeline.registry()))
      out.push_back(std::move(e));
    return out;
  }();
  return entries;
}

}  // namespace

TEST_CASE("xml layer round-trips and rejects malformed input") {
  const char* doc = "<a x=\"1\"><b>text &amp; more</b><c/></a>";
  XmlNode parsed = xml_parse(doc);
  std::string emitted = xml_write(parsed);
  XmlNode again = xml_parse(emitted);
  CHECK(xml_write(again) == emitted);

  CHECK(kind_of([] { xml_parse("<a><b></a>"); }) == ErrorKind::XmlError);
  CHECK(kind_of([] { xml_parse("not xml"); }) == ErrorKind::XmlError);
  CHECK(kind_of([] { xml_parse("<a attr=noquote/>"); }) == ErrorKind::XmlError);
}

TEST_CASE("parse of emit is the identity on fixture markup") {
  for (const GoldEntry& entry : all_fixture_entries()) {
    CAPTURE(entry.id);
    ParallelMarkup pm = entry.gold;
    std::string first = emit(pm);
    ParallelMarkup reparsed = parse_mathml(first);
    CHECK(reparsed == pm);
    CHECK(emit(reparsed) == first);  // byte-identical second pass
    // every emitted document is well-formed per the generic parser
    CHECK_NOTHROW(xml_parse(first));
  }
}

TEST_CASE("riemann markup carries the zeta annotation and cross references") {
  auto entries = all_fixture_entries();
  const GoldEntry* riemann = nullptr;
  for (const auto& e : entries)
    if (e.id == 1) riemann = &e;
  REQUIRE(riemann != nullptr);
  CHECK(riemann->gold_mathml.find("cd=\"wikidata\"") != std::string::npos);
  CHECK(riemann->gold_mathml.find("Q187235") != std::string::npos);

  ParallelMarkup pm = parse_mathml(riemann->gold_mathml);
  REQUIRE(pm.presentation);
  REQUIRE(pm.content);
  CHECK(token_count(*pm.presentation) == 18);
  CHECK(token_count(*pm.content) == 16);
  // implication heads and the zeta symbol line up across the two trees
  auto has_pair = [&](int p, int c) {
    return std::find(pm.xrefs.begin(), pm.xrefs.end(), std::make_pair(p, c)) != pm.xrefs.end();
  };
  CHECK(has_pair(7, 19));
  CHECK(has_pair(5, 20));
  CHECK(has_pair(1, 21));
}

TEST_CASE("empty math element") {
  ParallelMarkup pm = parse_mathml("<math/>");
  CHECK(!pm.presentation);
  CHECK(!pm.content);
  CHECK(pm.xrefs.empty());
}

TEST_CASE("single identifier round trip") {
  ExprNode x("x", NodeKind::Identifier);
  ExprNode cx("x", NodeKind::Identifier);
  cx.attrs["srcid"] = "0";
  x.id = 0;
  ParallelMarkup pm = build_parallel(x, cx);
  std::string xml = emit(pm);
  CHECK(xml.find("<mi id=\"1\"") != std::string::npos);
  CHECK(parse_mathml(xml) == pm);
}

TEST_CASE("foreign elements are preserved, not dropped") {
  const char* xml =
      "<math><semantics><mrow><mi>x</mi><mystery keep=\"1\"><mi>y</mi></mystery></mrow>"
      "</semantics></math>";
  ParallelMarkup pm = parse_mathml(xml);
  REQUIRE(pm.presentation);
  bool found = false;
  for (const ExprNode* n : preorder(*pm.presentation))
    if (n->label == "mystery" && n->kind == NodeKind::Generic) found = true;
  CHECK(found);
}

TEST_CASE("generic xml export trees are scoreable") {
  const char* pom_style =
      "<expression><token type=\"function\">zeta</token><group><token>s</token></group>"
      "</expression>";
  ExprNode tree = tree_from_xml(pom_style);
  CHECK(tree.label == "expression");
  CHECK(node_count(tree) == 4);
  CHECK(kind_of([] { parse_mathml("<expression/>"); }) == ErrorKind::NotMathML);
}

TEST_CASE("normalize_presentation") {
  ExprNode inner("x", NodeKind::Identifier);
  ExprNode row1("", NodeKind::Row);
  row1.children.push_back(inner);
  ExprNode row2("", NodeKind::Row);
  row2.children.push_back(row1);
  ExprNode flat = normalize_presentation(row2);
  CHECK(flat.label == "x");
  CHECK(flat.is_leaf());

  // mfenced expands into explicit fences and separators
  ExprNode fenced("mfenced", NodeKind::Generic);
  fenced.children.emplace_back("a", NodeKind::Identifier);
  fenced.children.emplace_back("b", NodeKind::Identifier);
  ExprNode expanded = normalize_presentation(fenced);
  auto leaves = leaf_labels(expanded);
  REQUIRE(leaves.size() == 5);
  CHECK(leaves[0] == "(");
  CHECK(leaves[1] == "a");
  CHECK(leaves[2] == ",");
  CHECK(leaves[3] == "b");
  CHECK(leaves[4] == ")");

  // idempotence and leaf preservation on fixture presentation trees
  for (const GoldEntry& entry : all_fixture_entries()) {
    REQUIRE(entry.gold.presentation.has_value());
    ExprNode once = normalize_presentation(*entry.gold.presentation);
    ExprNode twice = normalize_presentation(once);
    CHECK(once == twice);
    CHECK(leaf_labels(once) == leaf_labels(*entry.gold.presentation));
  }

  ExprNode already("y", NodeKind::Identifier);
  CHECK(normalize_presentation(already) == already);
}

TEST_CASE("parallel markup invariants are enforced") {
  ExprNode a("x", NodeKind::Identifier);
  a.id = 1;
  ExprNode c("x", NodeKind::Identifier);
  c.id = 2;
  ParallelMarkup pm;
  pm.presentation = a;
  pm.content = c;
  pm.xrefs = {{1, 2}};
  CHECK_NOTHROW(pm.validate());

  pm.xrefs = {{1, 99}};
  CHECK(kind_of([&] { pm.validate(); }) == ErrorKind::ParseError);
}

TEST_CASE("namespaced math roots are accepted") {
  ParallelMarkup pm = parse_mathml(
      "<math xmlns=\"http://www.w3.org/1998/Math/MathML\"><mi>x</mi></math>");
  REQUIRE(pm.presentation);
  CHECK(pm.presentation->label == "x");
  ParallelMarkup ns = parse_mathml("<m:math><m:mi>x</m:mi></m:math>");
  REQUIRE(ns.presentation);
  CHECK(ns.presentation->label == "x");
  CHECK(ns.presentation->kind == NodeKind::Identifier);
}

TEST_CASE("typical third-party markup normalizes to the bundled gold shape") {
  // style wrappers, invisible times, unicode minus, implied-mrow msqrt
  const char* foreign =
      "<math xmlns=\"http://www.w3.org/1998/Math/MathML\"><semantics><mrow><mi>E</mi>"
      "<mo>=</mo><mstyle><mrow><mi>m</mi><mo>⁢</mo><msup><mi>c</mi><mn>2</mn></msup>"
      "</mrow></mstyle></mrow></semantics></math>";
  ParallelMarkup pm = parse_mathml(foreign);
  REQUIRE(pm.presentation);

  Pipeline pipeline = fixture_pipeline();
  PipelineOptions opts;
  Pipeline::Result ours = pipeline.convert("E = mc^2", "", opts);
  CHECK(structural_ted(normalize_presentation(*pm.presentation),
                       normalize_presentation(*ours.markup.presentation)) == 0.0);

  ExprNode sqrt_row = parse_mathml("<math><msqrt><mi>x</mi><mo>+</mo><mn>1</mn></msqrt></math>")
                          .presentation.value();
  CHECK(sqrt_row.kind == NodeKind::Radical);
  REQUIRE(sqrt_row.children.size() == 1);

  ExprNode minus = parse_mathml("<math><mo>−</mo></math>").presentation.value();
  CHECK(minus.label == "-");

  ParallelMarkup rational = parse_mathml(
      "<math><semantics><mn>0.5</mn><annotation-xml encoding=\"MathML-Content\">"
      "<cn type=\"rational\">1<sep/>2</cn></annotation-xml></semantics></math>");
  REQUIRE(rational.content);
  CHECK(print_term(*rational.content) == "divide(1,2)");
}

TEST_CASE("hostile inputs raise errors instead of crashing") {
  // pathological nesting stays an error, not a stack overflow
  std::string deep;
  for (int i = 0; i < 5000; ++i) deep += "<a>";
  deep += "x";
  for (int i = 0; i < 5000; ++i) deep += "</a>";
  CHECK(kind_of([&] { xml_parse(deep); }) == ErrorKind::XmlError);

  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> len(0, 60);
  std::uniform_int_distribution<int> ch(32, 126);
  int parsed = 0;
  for (int iter = 0; iter < 500; ++iter) {
    std::string junk;
    int n = len(rng);
    for (int i = 0; i < n; ++i) junk += static_cast<char>(ch(rng));
    try {
      parse_mathml(junk);
      ++parsed;
    } catch (const Error&) {
      // any structured error is fine
    }
  }
  CHECK(parsed >= 0);  // reaching here means no crash
}
