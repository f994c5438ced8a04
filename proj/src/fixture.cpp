#include "mathcvt/fixture.hpp"

#include <fstream>

#include <json.hpp>

#include "mathcvt/error.hpp"
#include "mathcvt/gold.hpp"

namespace mathcvt {

std::string fixture_lexicon_text() {
  return
      "# lexeme\trole\tcd\tsymbol_id\tlabel\tdescription\n"
      "\\zeta\tfunction\twikidata\tQ187235\tRiemann zeta function\tzeta function\n"
      "\\Gamma\tfunction\twikidata\tQ190573\tgamma function\tEuler gamma function\n"
      "\\Re\tfunction\tlocal\treal-part\treal part\treal part of a complex number\n"
      "\\Im\tfunction\tlocal\timaginary-part\timaginary part\timaginary part of a complex number\n"
      "\\sin\tfunction\tlocal\tsine\tsine\t\n"
      "\\cos\tfunction\tlocal\tcosine\tcosine\t\n"
      "\\tan\tfunction\tlocal\ttangent\ttangent\t\n"
      "\\log\tfunction\tlocal\tlogarithm\tlogarithm\t\n"
      "\\exp\tfunction\tlocal\texponential\texponential function\t\n"
      "E\tidentifier\twikidata\tQ11379\tenergy\tphysical energy\n"
      "E\tfunction\twikidata\tQ200125\texpected value\texpectation of a random variable\n"
      "m\tidentifier\twikidata\tQ11423\tmass\tphysical mass\n"
      "c\tidentifier\twikidata\tQ2111\tspeed of light\tspeed of light in vacuum\n"
      "\\pi\tconstant\twikidata\tQ167\tpi\tcircle constant\n"
      "\\infty\tconstant\tlocal\tinfinity\tinfinity\t\n"
      "\\hbar\tconstant\tlocal\threduced-planck\treduced Planck constant\t\n"
      "\\BesselJ\tfunction\tlocal\tbessel-j\tBessel function of the first kind\t\n"
      "\\LegendreQ\tfunction\tlocal\tlegendre-q\tassociated Legendre function of the second kind\t\n"
      "\\JacobiP\tfunction\tlocal\tjacobi-p\tJacobi polynomial\t\n"
      "\\partial\toperator\tlocal\tpartial-derivative\tpartial derivative\t\n"
      "\\nabla\toperator\tlocal\tnabla\tgradient\t\n"
      "T\tidentifier\tlocal\ttemperature\ttemperature\t\n"
      "v\tidentifier\tlocal\tvelocity\tvelocity\t\n";
}

std::string fixture_taxonomy_text() {
  return
      "# class\tparent (empty for roots)\n"
      "symbol\t\n"
      "operation\tsymbol\n"
      "relation\tsymbol\n"
      "object\tsymbol\n"
      "arith\toperation\n"
      "logic\toperation\n"
      "calculus\toperation\n"
      "settheory\toperation\n"
      "linalg\toperation\n"
      "order\trelation\n"
      "equality\trelation\n"
      "number\tobject\n"
      "identifier\tobject\n"
      "constant\tobject\n"
      "plus\tarith\n"
      "minus\tarith\n"
      "times\tarith\n"
      "divide\tarith\n"
      "power\tarith\n"
      "root\tarith\n"
      "factorial\tarith\n"
      "abs\tarith\n"
      "and\tlogic\n"
      "or\tlogic\n"
      "not\tlogic\n"
      "implies\tlogic\n"
      "iff\tlogic\n"
      "int\tcalculus\n"
      "sum\tcalculus\n"
      "partial-derivative\tcalculus\n"
      "union\tsettheory\n"
      "intersect\tsettheory\n"
      "set\tsettheory\n"
      "interval\tsettheory\n"
      "in\tsettheory\n"
      "eq\tequality\n"
      "neq\tequality\n"
      "equivalent\tequality\n"
      "lt\torder\n"
      "gt\torder\n"
      "leq\torder\n"
      "geq\torder\n"
      "tendsto\torder\n"
      "real\tnumber\n"
      "integer\treal\n";
}

std::string fixture_shortcuts_text() {
  return
      "# priced equivalence rewrites used by the edit distance\n"
      "divide(?a, ?b) <-> times(?a, power(?b, minus(1)))\n"
      "root(?a) <-> power(?a, divide(1, 2))\n";
}

std::string fixture_equivalence_text() {
  return
      "# equivalences priced at zero by the equivalence check\n"
      "times(?a, plus(?b, ?c)) <-> plus(times(?a, ?b), times(?a, ?c))\n"
      "plus(divide(?a, ?c), divide(?b, ?c)) <-> divide(plus(?a, ?b), ?c)\n"
      "times(?a, plus(divide(?b, ?c), divide(?d, ?c))) <-> divide(times(?a, plus(?b, ?d)), ?c)\n"
      "divide(?a, ?b) <-> times(?a, power(?b, minus(1)))\n";
}

std::string fixture_registry_text() {
  return
      "# name\targs\tshape\tdisplay\trole\tcd\tsymbol\tlabel\n"
      "\\Struve\t1:0:1\tsubcall\tH\tfunction\tlocal\tstruve-h\tStruve function\n"
      "\\erf\t0:0:1\tcall\terf\tfunction\tlocal\terror-function\terror function\n";
}

Pipeline fixture_pipeline() {
  MacroRegistry registry = builtin_registry();
  register_table1_macros(registry);
  parse_registry_text(registry, fixture_registry_text(), "fixture-registry");
  Lexicon lexicon = parse_lexicon(fixture_lexicon_text(), "fixture-lexicon");
  return Pipeline(std::move(registry), std::move(lexicon));
}

namespace {

struct EntrySpec {
  int id;
  const char* name;
  const char* type;
  const char* original;
  const char* corrected;
  const char* semantic;
  const char* context;
  const char* url;
};

const EntrySpec kGoldEntries[] = {
    {1, "Riemann hypothesis", "relation",
     "\\zeta(s) = 0 \\,\\Rightarrow\\, \\Re s = \\frac12 \\lor \\Im s=0",
     "\\zeta(s) = 0 \\Rightarrow \\Re s = \\frac12 \\lor \\Im s=0",
     "\\zeta(s) = 0 \\Rightarrow \\Re s = \\frac12 \\lor \\Im s=0", "",
     "https://en.wikipedia.org/wiki/Riemann_hypothesis"},
    {2, "mass-energy equivalence", "equation", "E = mc^2 \\tag{\\star}",
     "E = mc^2 \\tag{\\star}", "E = mc^2 \\tag{\\star}",
     "In relativity, where $E$ denotes the energy, $m$ the mass and $c$ the speed of light, "
     "the relation $E = mc^2 \\tag{\\star}$ holds.",
     "https://en.wikipedia.org/wiki/Mass%E2%80%93energy_equivalence"},
    {3, "three-term recurrence", "definition", "a_n = a_{n-1} + a_{n-2}",
     "a_n = a_{n-1} + a_{n-2}", "a_n = a_{n-1} + a_{n-2}",
     "where $a_n$ is the term of index $n$ of the sequence", ""},
    {4, "midpoint bound", "general", "x_\\text{max} = \\frac{x_1 + x_2}{2}",
     "x_\\text{max} = \\frac{x_1 + x_2}{2}", "x_\\text{max} = \\frac{x_1 + x_2}{2}", "", ""},
    {5, "ring commutator", "definition", "[a,b] = ab - ba", "[a,b] = ab - ba",
     "\\commutator{a}{b} = a b - b a", "", ""},
    {6, "anticommutator", "definition", "\\{a,b\\} = ab + ba", "\\{a,b\\} = ab + ba",
     "\\anticommutator{a}{b} = a b + b a", "", ""},
    {7, "mixed tensor", "general", "T^\\mu_\\nu", "T^\\mu_\\nu", "\\tensor{T}{\\mu}{\\nu}", "",
     ""},
    {8, "metric contraction", "general", "g^{(3)}", "g^{(3)}", "\\contraction{g}{3}", "", ""},
    {9, "unitarity", "equation", "A^\\dagger A = I", "A^\\dagger A = I",
     "\\adjoint{A} A = I", "", ""},
    {10, "galilean boost", "equation", "x' = x + vt", "x' = x + vt",
     "\\transform{x} = x + v t", "", ""},
    {11, "thirty degrees", "equation", "\\sin(30^\\circ) = \\frac12",
     "\\sin(30^\\circ) = \\frac12", "\\sin(\\degreeof{30}) = \\frac12", "", ""},
    {12, "index summation", "general", "z = x^a y_a", "z = x^a y_a", "z = x^a y_a", "", ""},
    {13, "fraction layout", "general", "\\frac{a}{b}", "\\frac{a}{b}", "\\frac{a}{b}", "", ""},
    {14, "beveled fraction layout", "general", "\\sfrac{a}{b}", "\\sfrac{a}{b}",
     "\\sfrac{a}{b}", "", ""},
    {15, "inline fraction layout", "general", "a/b", "a/b", "a/b", "", ""},
    {16, "half-plane condition", "relation", "\\Re s > 1", "\\Re s > 1", "\\Re s > 1", "", ""},
    {17, "gamma recurrence", "equation", "\\Gamma(z+1) = z\\Gamma(z)",
     "\\Gamma(z+1) = z \\Gamma(z)", "\\EulerGamma@{z+1} = z \\EulerGamma@{z}", "",
     "https://dlmf.nist.gov/5.5"},
    {18, "Bessel value", "equation", "J_0(0) = 1", "J_0(0) = 1", "\\BesselJ{0}@{0} = 1", "",
     "https://dlmf.nist.gov/10.2"},
    {19, "Legendre function", "general", "Q^\\mu_\\nu(z)", "Q^\\mu_\\nu(z)",
     "\\LegendreQ[\\mu]{\\nu}@{z}", "", "https://dlmf.nist.gov/14.3"},
    {20, "Jacobi polynomial", "general", "P^{(\\alpha,\\beta)}_n(x)",
     "P^{(\\alpha,\\beta)}_n(x)", "\\JacobiP{\\alpha}{\\beta}{n}@{x}", "",
     "https://dlmf.nist.gov/18.3"},
    {21, "congruence with modulus", "relation", "a \\equiv b \\pmod{n}",
     "a \\equiv b \\pmod{n}", "a \\equiv b \\pmod{n}", "", ""},
    {22, "absolute value", "definition",
     "|x| = \\begin{cases} x & x \\geq 0 \\\\ -x & x < 0 \\end{cases}",
     "|x| = \\begin{cases} x & x \\geq 0 \\\\ -x & x < 0 \\end{cases}",
     "|x| = \\begin{cases} x & x \\geq 0 \\\\ -x & x < 0 \\end{cases}", "", ""},
    {23, "sinc", "definition", "\\operatorname{sinc} x = \\frac{\\sin x}{x}",
     "\\operatorname{sinc} x = \\frac{\\sin x}{x}",
     "\\operatorname{sinc} x = \\frac{\\sin x}{x}", "", ""},
    {24, "additivity of expectation", "equation", "E(X+Y) = E(X) + E(Y)",
     "E(X+Y) = E(X) + E(Y)", "E(X+Y) = E(X) + E(Y)",
     "For independent summands, $E$ denotes the expected value of a random variable.", ""},
};

// ten function-style expressions; only the first four contexts actually say
// "function", the rest leave the head ambiguous
const EntrySpec kFunctionEntries[] = {
    {101, "additivity candidate", "general", "F(a+b) = Fa + Fb", "F(a+b) = Fa + Fb",
     "\\operatorname{F}(a+b) = \\operatorname{F}a + \\operatorname{F}b",
     "Let $F$ be a linear function on the reals; then $F(a+b) = Fa + Fb$ holds.", ""},
    {102, "shift argument", "general", "f(x+y)", "f(x+y)", "\\operatorname{f}(x+y)",
     "the function $f$ maps reals to reals", ""},
    {103, "difference argument", "general", "g(u-v)", "g(u-v)", "\\operatorname{g}(u-v)",
     "where $g$ is a smooth function of one variable", ""},
    {104, "periodic head", "general", "\\phi(t+1)", "\\phi(t+1)",
     "\\operatorname{\\phi}(t+1)", "the function $\\phi$ is periodic with period one", ""},
    {105, "measured quantity", "general", "h(x+1)", "h(x+1)", "\\operatorname{h}(x+1)",
     "the quantity $h$ was measured in the previous section", ""},
    {106, "boundary term", "general", "u(a+b)", "u(a+b)", "\\operatorname{u}(a+b)",
     "$u$ appears in the boundary terms", ""},
    {107, "weight head", "general", "w(p+q)", "w(p+q)", "\\operatorname{w}(p+q)",
     "with $w$ as above", ""},
    {108, "introduced symbol", "general", "k(m+n)", "k(m+n)", "\\operatorname{k}(m+n)",
     "the symbol $k$ was introduced earlier", ""},
    {109, "radial head", "general", "r(s+t)", "r(s+t)", "\\operatorname{r}(s+t)",
     "consider $r$ near the origin", ""},
    {110, "distance preserving", "general", "q(x+z)", "q(x+z)", "\\operatorname{q}(x+z)",
     "the map $q$ preserves distances", ""},
};

std::string gold_jsonl(const Pipeline& pipeline, const EntrySpec* specs, size_t count) {
  std::string out;
  for (size_t i = 0; i < count; ++i) {
    const EntrySpec& spec = specs[i];
    PipelineOptions opts;  // every refinement on
    Pipeline::Result conv = pipeline.convert(spec.semantic, spec.context, opts);
    if (!conv.content)
      raise(ErrorKind::ParseError, "fixture entry " + std::to_string(spec.id) +
                                       ": semantic TeX produced no content tree: " +
                                       conv.content_error);
    nlohmann::ordered_json j;
    j["id"] = spec.id;
    j["name"] = spec.name;
    j["type"] = spec.type;
    j["original_tex"] = spec.original;
    j["corrected_tex"] = spec.corrected;
    j["semantic_tex"] = spec.semantic;
    j["gold_mathml"] = emit(conv.markup);
    if (spec.context[0]) j["context"] = spec.context;
    if (spec.url[0]) j["url"] = spec.url;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> generate_fixtures() {
  Pipeline pipeline = fixture_pipeline();
  std::map<std::string, std::string> files;
  files["lexicon.tsv"] = fixture_lexicon_text();
  files["taxonomy.tsv"] = fixture_taxonomy_text();
  files["shortcuts.rules"] = fixture_shortcuts_text();
  files["equivalence.rules"] = fixture_equivalence_text();
  files["registry.tsv"] = fixture_registry_text();
  files["gold.jsonl"] =
      gold_jsonl(pipeline, kGoldEntries, sizeof(kGoldEntries) / sizeof(kGoldEntries[0]));
  files["gold_functions.jsonl"] = gold_jsonl(
      pipeline, kFunctionEntries, sizeof(kFunctionEntries) / sizeof(kFunctionEntries[0]));
  files["adapters.sample.json"] =
      "[\n"
      "  {\"name\": \"identity\", \"command\": [\"cat\"], \"input_mode\": \"stdin\", "
      "\"timeout\": 10}\n"
      "]\n";
  return files;
}

void write_fixtures(const std::string& dir) {
  for (const auto& [name, content] : generate_fixtures()) {
    std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorKind::IoError, "cannot write " + path);
    out << content;
  }
}

}  // namespace mathcvt
