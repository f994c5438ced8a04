#include <doctest.h>

#include <functional>

#include "mathcvt/error.hpp"
#include "mathcvt/fixture.hpp"
#include "mathcvt/lexicon.hpp"

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
}  // namespace

TEST_CASE("annotation invariants") {
  CHECK(!SemanticAnnotation{"wikidata", "Q187235", "zeta", ""}.validate());
  CHECK(SemanticAnnotation{"", "Q1", "x", ""}.validate().has_value());
  CHECK(SemanticAnnotation{"wikidata", "187235", "x", ""}.validate().has_value());
  CHECK(SemanticAnnotation{"wikidata", "Q12a", "x", ""}.validate().has_value());
  CHECK(!SemanticAnnotation{"local", "anything-goes", "x", ""}.validate());
}

TEST_CASE("lookup returns context-free readings") {
  Lexicon lex = parse_lexicon(fixture_lexicon_text(), "fixture");

  auto zeta = lex.lookup("\\zeta");
  REQUIRE(zeta.size() == 1);
  CHECK(zeta[0].annotation.cd == "wikidata");
  CHECK(zeta[0].annotation.symbol_id == "Q187235");
  CHECK(zeta[0].role == SymbolRole::Function);

  CHECK(lex.lookup("unknowntoken").empty());

  auto e = lex.lookup("E");
  REQUIRE(e.size() == 2);
  CHECK(e[0].annotation.label == "energy");
  CHECK(e[1].annotation.label == "expected value");
}

TEST_CASE("repeated lookups are identical") {
  Lexicon lex = parse_lexicon(fixture_lexicon_text(), "fixture");
  auto a = lex.lookup("E");
  auto b = lex.lookup("E");
  CHECK(a == b);
}

TEST_CASE("fixture lexicon size and coverage") {
  Lexicon lex = parse_lexicon(fixture_lexicon_text(), "fixture");
  CHECK(lex.size() >= 20);
  CHECK(lex.contains("\\zeta"));
  CHECK(lex.contains("\\Gamma"));
  CHECK(lex.contains("\\BesselJ"));
}

TEST_CASE("lexicon loading errors") {
  CHECK(parse_lexicon("", "t").size() == 0);
  CHECK(parse_lexicon("# only a comment\n\n", "t").size() == 0);

  // duplicate (lexeme, annotation) row
  std::string dup =
      "x\tidentifier\tlocal\tfoo\tfoo thing\t\n"
      "x\tidentifier\tlocal\tfoo\tfoo thing\t\n";
  CHECK(kind_of([&] { parse_lexicon(dup, "t"); }) == ErrorKind::FormatError);

  CHECK(kind_of([] { parse_lexicon("x\tidentifier\tlocal\n", "t"); }) == ErrorKind::FormatError);
  CHECK(kind_of([] { parse_lexicon("x\tnoise\tlocal\tfoo\tfoo\t\n", "t"); }) ==
        ErrorKind::FormatError);
  CHECK(kind_of([] { parse_lexicon("x\tidentifier\twikidata\t123\tx\t\n", "t"); }) ==
        ErrorKind::FormatError);
}

TEST_CASE("error message carries the line number") {
  try {
    parse_lexicon("ok\tidentifier\tlocal\ta\ta\t\nbroken line\n", "lex.tsv");
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("lex.tsv:2") != std::string::npos);
  }
}
