#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mathcvt/adapter.hpp"
#include "mathcvt/gold.hpp"
#include "mathcvt/pipeline.hpp"
#include "mathcvt/ted.hpp"

namespace mathcvt {

struct EvalOptions {
  CostModel cost_model = CostModel::structural();  // r=0, i=d=1
  std::vector<ShortcutRule> rules;
  RefinementConfig refine;
  bool use_context = true;
  int jobs = 1;  // >1 evaluates entries in parallel (OpenMP)
};

enum class ContentState { Value, Failure, Absent };

struct EvalResult {
  int entry_id = 0;
  std::string converter;
  std::optional<double> presentation_distance;  // nullopt records a failure
  ContentState content_state = ContentState::Absent;
  double content_distance = 0.0;
  double wall_time_s = 0.0;
  bool success = false;
  std::string error;
};

/// One result per (entry, converter); the internal pipeline is always the
/// first converter ("internal"). Adapter crashes and timeouts are contained
/// in their own rows; the run itself never aborts. Results come back sorted
/// by (converter, entry id) regardless of evaluation order.
std::vector<EvalResult> run_eval(const std::vector<GoldEntry>& gold,
                                 const std::vector<ConverterAdapter>& adapters,
                                 const Pipeline& pipeline, const EvalOptions& options);

void write_results_jsonl(const std::string& path, const std::vector<EvalResult>& results);
std::vector<EvalResult> read_results_jsonl(const std::string& path);
std::string results_to_jsonl(const std::vector<EvalResult>& results);
std::vector<EvalResult> results_from_jsonl(const std::string& text,
                                           const std::string& origin = "<string>");

struct Report {
  std::string summary_csv;  // per-converter aggregates, deterministic
  std::string timing_csv;   // wall-clock totals, excluded from determinism checks
  std::string plot_csv;     // per-entry rows for external plotting
};

/// Aggregates results into report files. Throws EmptyResults on empty input.
Report report(const std::vector<EvalResult>& results);

}  // namespace mathcvt
