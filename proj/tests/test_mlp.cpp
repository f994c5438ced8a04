#include <doctest.h>

#include <cmath>

#include "mathcvt/fixture.hpp"
#include "mathcvt/latex_parser.hpp"
#include "mathcvt/mlp.hpp"

using namespace mathcvt;

namespace {

const Pipeline& pipe() {
  static Pipeline p = fixture_pipeline();
  return p;
}

std::vector<DefiniensCandidate> extract(const std::string& text, const std::string& formula) {
  ContextDocument doc = context_from_text(text);
  doc.formulae.emplace_back(doc.text.size() + 1, formula);
  doc.target_index = static_cast<int>(doc.formulae.size()) - 1;
  return extract_candidates(doc, pipe().registry());
}

}  // namespace

TEST_CASE("scoring formula and hand-computed expectation") {
  MlpOptions opt;
  // the documented closed form, evaluated independently here
  auto expected = [&](int dw, int df) {
    return opt.alpha * std::exp(-opt.lambda_words * dw) +
           (1 - opt.alpha) * std::exp(-opt.lambda_formulae * df);
  };
  CHECK(candidate_score(3, 0, opt) == doctest::Approx(expected(3, 0)).epsilon(1e-12));
  CHECK(candidate_score(1, 2, opt) == doctest::Approx(expected(1, 2)).epsilon(1e-12));

  auto cands = extract("where E denotes the energy", "E=mc^2");
  REQUIRE(!cands.empty());
  CHECK(cands[0].identifier == "E");
  CHECK(cands[0].definiens == "energy");
  CHECK(cands[0].score > 0.5);
  CHECK(cands[0].score == doctest::Approx(expected(cands[0].distance_words, 0)).epsilon(1e-12));
}

TEST_CASE("empty context yields no candidates") {
  ContextDocument doc = context_from_text("");
  doc.formulae.emplace_back(1, "E=mc^2");
  CHECK(extract_candidates(doc, pipe().registry()).empty());
}

TEST_CASE("function context ranks the function reading first") {
  auto cands = extract("the function $f$ maps reals to reals", "f(x+y)");
  REQUIRE(!cands.empty());
  CHECK(cands[0].identifier == "f");
  CHECK(cands[0].definiens == "function");
}

TEST_CASE("score does not increase with word distance") {
  MlpOptions opt;
  double last = 2.0;
  for (int dw = 1; dw <= 10; ++dw) {
    double s = candidate_score(dw, 0, opt);
    CHECK(s <= last);
    last = s;
  }
}

TEST_CASE("candidates sorted descending by score") {
  auto cands =
      extract("the function $f$ maps the energy $E$ to a constant value", "f(E+x)");
  for (size_t i = 1; i < cands.size(); ++i) CHECK(cands[i - 1].score >= cands[i].score);
}

TEST_CASE("identify_symbols") {
  const char* riemann = "\\zeta(s) = 0 \\Rightarrow \\Re s = \\frac12 \\lor \\Im s=0";
  auto symbols = identify_symbols(parse_latex(riemann, pipe().registry()));
  for (const char* expected : {"\\Rightarrow", "=", "\\lor", "\\zeta", "\\Re", "\\Im"})
    CHECK(symbols.count(expected) == 1);
  CHECK(symbols.count("s") == 0);

  CHECK(identify_symbols(parse_latex("x", pipe().registry())).empty());
  CHECK(identify_symbols(parse_latex("p_i", pipe().registry())).empty());
}

TEST_CASE("filter_with_lexicon") {
  const Lexicon& lex = pipe().lexicon();

  // role vocabulary beats an unknown definiens regardless of score order
  std::vector<DefiniensCandidate> cands = {{"f", "banana", 0.95, 1, 0},
                                           {"f", "function", 0.9, 2, 0}};
  auto out = filter_with_lexicon(cands, lex);
  REQUIRE(out.count("f") == 1);
  CHECK(out["f"].role == SymbolRole::Function);
  CHECK(out["f"].definiens == "function");

  CHECK(filter_with_lexicon({}, lex).empty());

  // a definiens matching one of the identifier's own readings binds it
  std::vector<DefiniensCandidate> energy = {{"E", "energy", 0.8, 2, 0}};
  auto picked = filter_with_lexicon(energy, lex);
  REQUIRE(picked.count("E") == 1);
  REQUIRE(picked["E"].annotation.has_value());
  CHECK(picked["E"].annotation->symbol_id == "Q11379");

  // no survivor: identifier keeps the default role
  std::vector<DefiniensCandidate> junk = {{"z", "banana", 0.9, 1, 0}};
  auto defaulted = filter_with_lexicon(junk, lex);
  REQUIRE(defaulted.count("z") == 1);
  CHECK(defaulted["z"].role == SymbolRole::Identifier);
  CHECK(defaulted["z"].definiens.empty());
}

TEST_CASE("filter output never invents identifiers") {
  const Lexicon& lex = pipe().lexicon();
  std::vector<DefiniensCandidate> cands = {{"f", "function", 0.9, 1, 0},
                                           {"g", "banana", 0.8, 1, 0},
                                           {"E", "energy", 0.7, 1, 0}};
  auto out = filter_with_lexicon(cands, lex);
  for (const auto& [ident, _] : out)
    CHECK((ident == "f" || ident == "g" || ident == "E"));
}

TEST_CASE("pipeline determinism") {
  auto a = extract("the function $f$ maps reals to reals", "f(x+y)");
  auto b = extract("the function $f$ maps reals to reals", "f(x+y)");
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].identifier == b[i].identifier);
    CHECK(a[i].definiens == b[i].definiens);
    CHECK(a[i].score == b[i].score);
  }
}

TEST_CASE("xhtml context ingestion") {
  const char* xhtml =
      "<html><body><p>the function "
      "<math><semantics><mi>f</mi><annotation encoding=\"application/x-tex\">f</annotation>"
      "</semantics></math> maps reals to reals</p></body></html>";
  ContextDocument doc = context_from_xhtml(xhtml);
  REQUIRE(doc.formulae.size() == 1);
  CHECK(doc.formulae[0].second == "f");
  CHECK(doc.text.find("function") != std::string::npos);
  CHECK(doc.text.find("<") == std::string::npos);

  doc.formulae.emplace_back(doc.text.size() + 5, "f(x+y)");
  doc.target_index = 1;
  auto cands = extract_candidates(doc, pipe().registry());
  REQUIRE(!cands.empty());
  CHECK(cands[0].identifier == "f");
  CHECK(cands[0].definiens == "function");
}
