// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Run through ctest or directly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mathcvt/contentizer.hpp"
#include "mathcvt/error.hpp"
#include "mathcvt/eval.hpp"
#include "mathcvt/fixture.hpp"
#include "mathcvt/latex_parser.hpp"
#include "mathcvt/term.hpp"
#include "mathcvt/xml.hpp"
#include "oracle.hpp"

using namespace mathcvt;

namespace {

int failures = 0;

void criterion(int number, const char* what, bool ok, const std::string& note = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, what,
              note.empty() ? "" : " -- ", note.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixture_path(const char* name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string write_script(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << "#!/bin/sh\n" << body << "\n";
  out.close();
  std::string cmd = "chmod +x " + path;
  if (std::system(cmd.c_str()) != 0) std::abort();
  return path;
}

const char* kRiemann = "\\zeta(s) = 0 \\Rightarrow \\Re s = \\frac12 \\lor \\Im s=0";

}  // namespace

int main() {
  Pipeline pipeline = fixture_pipeline();
  std::vector<GoldEntry> gold = load_gold(fixture_path("gold.jsonl"), pipeline.registry());
  std::vector<GoldEntry> functions =
      load_gold(fixture_path("gold_functions.jsonl"), pipeline.registry());

  // 1. token accounting for the flagship implication
  {
    auto t0 = std::chrono::steady_clock::now();
    ExprNode pres = parse_latex(kRiemann, pipeline.registry());
    PipelineOptions opts;
    ReadingMap readings = pipeline.readings_for(pres, kRiemann, "", opts);
    ExprNode content = contentize(pres, readings, opts.refine);
    double elapsed = seconds_since(t0);
    bool ok = token_count(pres) == 18 && token_depth(pres) == 2 && token_count(content) == 16 &&
              token_depth(content) == 5 && elapsed < 1.0;
    char note[160];
    std::snprintf(note, sizeof note,
                  "presentation %d nodes depth %d, content %d nodes depth %d, %.3fs",
                  token_count(pres), token_depth(pres), token_count(content),
                  token_depth(content), elapsed);
    criterion(1, "flagship formula token accounting (18/2 and 16/5)", ok, note);
  }

  // 2. fraction rewrite pricing: 3i + r without the rule, e with it
  {
    ExprNode frac = parse_term("divide(a,b)");
    ExprNode expanded = parse_term("times(a,power(b,minus(1)))");
    CostModel cm = CostModel::with_shortcuts();
    auto rules = load_rules(fixture_path("shortcuts.rules"));
    double plain = ted(frac, expanded, cm);
    double priced = ted(frac, expanded, cm, rules);
    bool ok = std::fabs(plain - (3 * cm.insert_cost + cm.rename_cost)) <= 1e-9 &&
              std::fabs(priced - cm.shortcut_cost) <= 1e-9 &&
              cm.shortcut_cost < cm.rename_cost && cm.rename_cost < cm.insert_cost;
    char note[128];
    std::snprintf(note, sizeof note, "plain %.6f (want 3.75), with rule %.6f (want 0.5)", plain,
                  priced);
    criterion(2, "rewrite shortcut pricing", ok, note);
  }

  // 3. metric axioms against the exhaustive mapping oracle
  {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(246001);
    const double renames[] = {0.25, 0.5, 0.75, 1.0};
    int agree = 0, total = 1000;
    bool symmetric = true, triangle = true;
    ExprNode prev = oracle::random_tree(rng, 6);
    ExprNode prev2 = oracle::random_tree(rng, 6);
    for (int i = 0; i < total; ++i) {
      ExprNode a = oracle::random_tree(rng, 6);
      ExprNode b = oracle::random_tree(rng, 6);
      CostModel cm = CostModel::unit();
      cm.rename_cost = renames[i % 4];
      double dp = ted(a, b, cm);
      if (dp == oracle::ted(a, b, cm)) ++agree;
      if (ted(b, a, cm) != dp) symmetric = false;
      double ab = ted(prev, a, cm), bc = ted(a, prev2, cm), ac = ted(prev, prev2, cm);
      if (ac > ab + bc + 1e-12) triangle = false;
      prev = a;
      prev2 = b;
    }
    double elapsed = seconds_since(t0);
    bool ok = agree == total && symmetric && triangle && elapsed < 60.0;
    char note[160];
    std::snprintf(note, sizeof note, "%d/%d oracle-exact, symmetry %s, triangle %s, %.1fs",
                  agree, total, symmetric ? "yes" : "no", triangle ? "yes" : "no", elapsed);
    criterion(3, "edit distance matches brute force and satisfies the axioms", ok, note);
  }

  // 4. structural evaluation protocol: gold self-distance zero, refinements
  //    strictly lower the mean content distance on corrected TeX
  {
    bool self_zero = true;
    for (const auto& entry : gold) {
      if (structural_ted(*entry.gold.presentation, *entry.gold.presentation) != 0.0 ||
          structural_ted(*entry.gold.content, *entry.gold.content) != 0.0)
        self_zero = false;
      PipelineOptions popts;
      Pipeline::Result conv = pipeline.convert(entry.semantic_tex, entry.context, popts);
      if (!conv.markup.content ||
          structural_ted(*conv.markup.content, *entry.gold.content) != 0.0)
        self_zero = false;
    }

    EvalOptions opts;  // r=0, i=d=1
    opts.refine = RefinementConfig::all_on();
    opts.use_context = true;
    auto on = run_eval(gold, {}, pipeline, opts);
    opts.refine = RefinementConfig::all_off();
    opts.use_context = false;
    auto off = run_eval(gold, {}, pipeline, opts);
    auto mean_content = [](const std::vector<EvalResult>& rows) {
      double sum = 0;
      int n = 0;
      for (const auto& r : rows)
        if (r.content_state == ContentState::Value) {
          sum += r.content_distance;
          ++n;
        }
      return n ? sum / n : 0.0;
    };
    double mean_on = mean_content(on);
    double mean_off = mean_content(off);
    bool ok = self_zero && mean_off > 0.0 && mean_on < mean_off;
    char note[160];
    std::snprintf(note, sizeof note,
                  "gold self-distance zero %s, mean content distance %.3f -> %.3f",
                  self_zero ? "yes" : "no", mean_off, mean_on);
    criterion(4, "structural protocol: self-zero and refinement monotonicity", ok, note);
  }

  // 5. function-application experiment: exactly the four declared-function
  //    contexts reach distance zero
  {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<int> zero_ids;
    bool all_checked = true;
    for (const auto& entry : functions) {
      PipelineOptions popts;  // every refinement on, context in use
      Pipeline::Result conv = pipeline.convert(entry.corrected_tex, entry.context, popts);
      if (!conv.markup.content) {
        all_checked = false;
        continue;
      }
      double d = ted(*conv.markup.content, *entry.gold.content, CostModel::with_shortcuts());
      if (d <= 1e-9) zero_ids.push_back(entry.id);
    }
    double elapsed = seconds_since(t0);
    bool ok = all_checked && zero_ids == std::vector<int>{101, 102, 103, 104} &&
              functions.size() == 10 && elapsed < 10.0;
    std::string note = "zero-distance entries:";
    for (int id : zero_ids) note += " " + std::to_string(id);
    criterion(5, "context-declared functions converge to the gold content tree", ok, note);
  }

  // 6. round trips: markup and TeX
  {
    bool markup_ok = true, tex_ok = true;
    auto check_entries = [&](const std::vector<GoldEntry>& entries) {
      for (const auto& entry : entries) {
        ParallelMarkup pm = parse_mathml(entry.gold_mathml);
        std::string emitted = emit(pm);
        ParallelMarkup again = parse_mathml(emitted);
        if (!(again == pm) || emit(again) != emitted) markup_ok = false;
        try {
          xml_parse(emitted);
        } catch (const Error&) {
          markup_ok = false;
        }
        for (const std::string* tex : {&entry.corrected_tex, &entry.semantic_tex}) {
          ExprNode first = parse_latex(strip_formatting(*tex), pipeline.registry());
          ExprNode second = parse_latex(print_latex(first), pipeline.registry());
          if (!(first == second)) tex_ok = false;
        }
      }
    };
    check_entries(gold);
    check_entries(functions);
    criterion(6, "markup and TeX round trips are exact",  markup_ok && tex_ok,
              markup_ok ? (tex_ok ? "all entries" : "TeX fixed point failed")
                        : "markup identity failed");
  }

  // 7. zero-cost equivalence across distributed fractions
  {
    auto rules = load_rules(fixture_path("equivalence.rules"));
    PipelineOptions popts;
    ExprNode lhs =
        *pipeline.convert("a(\\frac{b}{c} + \\frac{d}{c})", "", popts).markup.content;
    ExprNode rhs = *pipeline.convert("\\frac{a(b+d)}{c}", "", popts).markup.content;
    bool ok = equivalence_zero_check(lhs, rhs, rules) &&
              !equivalence_zero_check(parse_term("x"), parse_term("y"), rules) &&
              equivalence_zero_check(lhs, lhs, rules);
    criterion(7, "distributed fraction pair has distance zero", ok);
  }

  // 8. special content macros carry their dictionary bindings
  {
    PipelineOptions popts;
    auto head_of = [&](const std::string& tex) {
      return *pipeline.convert(tex, "", popts).markup.content;
    };
    struct Want {
      const char* tex;
      const char* qid;
    };
    const Want wants[] = {
        {"\\commutator{a}{b}", "Q2989763"}, {"\\tensor{T}{\\mu}{\\nu}", "Q188524"},
        {"\\adjoint{A}", "Q2051983"},       {"\\transform{x}", "Q12202238"},
        {"\\degreeof{x}", "Q28390"},        {"\\contraction{g}{3}", "Q5165685"},
    };
    bool ok = true;
    for (const Want& w : wants) {
      ExprNode head = head_of(w.tex);
      const std::string* cd = head.attr("cd");
      if (head.label != w.qid || !cd || *cd != "wikidata") ok = false;
    }
    ExprNode comm = head_of("\\commutator{a}{b}");
    ExprNode anti = head_of("\\anticommutator{a}{b}");
    ExprNode interval = head_of("[a,b]");
    if (same_shape(comm, anti) || same_shape(comm, interval) || same_shape(anti, interval))
      ok = false;
    if (anti.label != "anticommutator" || interval.label != "interval") ok = false;
    criterion(8, "special content macros carry their dictionary ids and stay distinct", ok);
  }

  // 9. harness robustness: crash and timeout rows, deterministic report
  {
    std::vector<GoldEntry> subset(gold.begin(), gold.begin() + 3);
    std::string dir = "/tmp/mathcvt_acceptance";
    std::string mk = "mkdir -p " + dir;
    bool ok = std::system(mk.c_str()) == 0;
    ConverterAdapter crash{"crash", {write_script(dir + "/crash.sh", "exit 3")},
                           ConverterAdapter::InputMode::Stdin, 10.0};
    ConverterAdapter sleeper{"sleeper", {write_script(dir + "/sleep.sh", "sleep 30")},
                             ConverterAdapter::InputMode::Stdin, 1.0};
    EvalOptions opts;
    opts.jobs = 4;
    auto results = run_eval(subset, {crash, sleeper}, pipeline, opts);
    auto results2 = run_eval(subset, {crash, sleeper}, pipeline, opts);
    if (results.size() != subset.size() * 3) ok = false;
    for (const auto& r : results)
      if ((r.converter == "crash" || r.converter == "sleeper") && r.success) ok = false;
    Report rep1 = report(results);
    Report rep2 = report(results2);
    if (rep1.summary_csv != rep2.summary_csv || rep1.plot_csv != rep2.plot_csv) ok = false;
    criterion(9, "crashing and sleeping adapters are contained; reports deterministic", ok);
  }

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "OK", failures);
  return failures ? 1 : 0;
}
