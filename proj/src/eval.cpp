#include "mathcvt/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "mathcvt/error.hpp"

namespace mathcvt {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

EvalResult eval_internal(const GoldEntry& entry, const Pipeline& pipeline,
                         const EvalOptions& opt) {
  EvalResult r;
  r.entry_id = entry.id;
  r.converter = "internal";
  auto started = std::chrono::steady_clock::now();
  try {
    PipelineOptions popts;
    popts.refine = opt.refine;
    popts.use_context = opt.use_context;
    Pipeline::Result conv = pipeline.convert(entry.corrected_tex, entry.context, popts);
    r.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    r.success = conv.markup.presentation.has_value();
    if (entry.gold.presentation && conv.markup.presentation) {
      r.presentation_distance = ted(normalize_presentation(*conv.markup.presentation),
                                    normalize_presentation(*entry.gold.presentation),
                                    opt.cost_model, opt.rules);
    }
    if (!entry.gold.content || !conv.markup.content) {
      r.content_state = conv.content_error.empty() ? ContentState::Absent : ContentState::Failure;
      r.error = conv.content_error;
    } else {
      r.content_state = ContentState::Value;
      r.content_distance =
          ted(*conv.markup.content, *entry.gold.content, opt.cost_model, opt.rules);
    }
  } catch (const Error& e) {
    r.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    r.success = false;
    r.content_state = ContentState::Failure;
    r.error = e.what();
  }
  return r;
}

EvalResult eval_adapter(const GoldEntry& entry, const ConverterAdapter& adapter,
                        const EvalOptions& opt) {
  EvalResult r;
  r.entry_id = entry.id;
  r.converter = adapter.name;
  AdapterRun run = run_adapter(adapter, entry.corrected_tex);
  r.wall_time_s = run.wall_s;
  if (!run.ok) {
    r.success = false;
    r.error = run.error;
    r.content_state = ContentState::Failure;
    return r;
  }
  // success requires well-formed markup with at least one presentation node
  try {
    ParallelMarkup pm;
    try {
      pm = parse_mathml(run.output);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotMathML) {
        pm.presentation = tree_from_xml(run.output);  // generic tagger-style tree
      } else {
        throw;
      }
    }
    if (!pm.presentation) {
      r.success = false;
      r.error = "no presentation markup";
      r.content_state = ContentState::Absent;
      return r;
    }
    r.success = true;
    if (entry.gold.presentation)
      r.presentation_distance = ted(normalize_presentation(*pm.presentation),
                                    normalize_presentation(*entry.gold.presentation),
                                    opt.cost_model, opt.rules);
    if (pm.content && entry.gold.content) {
      r.content_state = ContentState::Value;
      r.content_distance = ted(*pm.content, *entry.gold.content, opt.cost_model, opt.rules);
    } else {
      r.content_state = ContentState::Absent;
    }
  } catch (const Error& e) {
    r.success = false;
    r.error = e.what();
    r.content_state = ContentState::Failure;
  }
  return r;
}

}  // namespace

std::vector<EvalResult> run_eval(const std::vector<GoldEntry>& gold,
                                 const std::vector<ConverterAdapter>& adapters,
                                 const Pipeline& pipeline, const EvalOptions& options) {
  options.cost_model.validate(!options.rules.empty());

  struct Task {
    const GoldEntry* entry;
    const ConverterAdapter* adapter;  // null: internal pipeline
  };
  std::vector<Task> tasks;
  for (const GoldEntry& e : gold) tasks.push_back({&e, nullptr});
  for (const ConverterAdapter& a : adapters)
    for (const GoldEntry& e : gold) tasks.push_back({&e, &a});

  std::vector<EvalResult> results(tasks.size());
  auto run_one = [&](size_t k) {
    const Task& t = tasks[k];
    results[k] = t.adapter ? eval_adapter(*t.entry, *t.adapter, options)
                           : eval_internal(*t.entry, pipeline, options);
  };

  if (options.jobs > 1) {
#ifdef _OPENMP
    omp_set_num_threads(options.jobs);
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < static_cast<long>(tasks.size()); ++k) run_one(static_cast<size_t>(k));
#else
    for (size_t k = 0; k < tasks.size(); ++k) run_one(k);
#endif
  } else {
    for (size_t k = 0; k < tasks.size(); ++k) run_one(k);
  }

  std::sort(results.begin(), results.end(), [](const EvalResult& a, const EvalResult& b) {
    if (a.converter != b.converter) return a.converter < b.converter;
    return a.entry_id < b.entry_id;
  });
  return results;
}

std::string results_to_jsonl(const std::vector<EvalResult>& results) {
  std::string out;
  for (const EvalResult& r : results) {
    nlohmann::ordered_json j;
    j["entry_id"] = r.entry_id;
    j["converter"] = r.converter;
    j["success"] = r.success;
    if (r.presentation_distance)
      j["presentation_distance"] = *r.presentation_distance;
    else
      j["presentation_distance"] = "failure";
    switch (r.content_state) {
      case ContentState::Value: j["content_distance"] = r.content_distance; break;
      case ContentState::Failure: j["content_distance"] = "failure"; break;
      case ContentState::Absent: break;
    }
    j["wall_time_s"] = r.wall_time_s;
    if (!r.error.empty()) j["error"] = r.error;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_results_jsonl(const std::string& path, const std::vector<EvalResult>& results) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::IoError, "cannot write " + path);
  out << results_to_jsonl(results);
}

std::vector<EvalResult> results_from_jsonl(const std::string& text, const std::string& origin) {
  std::vector<EvalResult> results;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      EvalResult r;
      r.entry_id = j.at("entry_id").get<int>();
      r.converter = j.at("converter").get<std::string>();
      r.success = j.at("success").get<bool>();
      const auto& pd = j.at("presentation_distance");
      if (pd.is_number()) r.presentation_distance = pd.get<double>();
      if (j.contains("content_distance")) {
        const auto& cd = j.at("content_distance");
        if (cd.is_number()) {
          r.content_state = ContentState::Value;
          r.content_distance = cd.get<double>();
        } else {
          r.content_state = ContentState::Failure;
        }
      }
      r.wall_time_s = j.at("wall_time_s").get<double>();
      if (j.contains("error")) r.error = j.at("error").get<std::string>();
      results.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorKind::SchemaError, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return results;
}

std::vector<EvalResult> read_results_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return results_from_jsonl(buf.str(), path);
}

Report report(const std::vector<EvalResult>& results) {
  if (results.empty()) raise(ErrorKind::EmptyResults, "no results to report");

  struct Agg {
    int entries = 0;
    int successes = 0;
    int pres_n = 0;
    double pres_sum = 0;
    int content_n = 0;
    double content_sum = 0;
    double wall = 0;
  };
  std::map<std::string, Agg> by_converter;
  for (const EvalResult& r : results) {
    Agg& a = by_converter[r.converter];
    ++a.entries;
    if (r.success) ++a.successes;
    if (r.presentation_distance) {
      ++a.pres_n;
      a.pres_sum += *r.presentation_distance;
    }
    if (r.content_state == ContentState::Value) {
      ++a.content_n;
      a.content_sum += r.content_distance;
    }
    a.wall += r.wall_time_s;
  }

  Report rep;
  rep.summary_csv =
      "converter,entries,successes,presentation_n,mean_presentation_distance,content_n,mean_"
      "content_distance\n";
  for (const auto& [name, a] : by_converter) {
    rep.summary_csv += name + "," + std::to_string(a.entries) + "," +
                       std::to_string(a.successes) + "," + std::to_string(a.pres_n) + "," +
                       (a.pres_n ? format_double(a.pres_sum / a.pres_n) : "NA") + "," +
                       std::to_string(a.content_n) + "," +
                       (a.content_n ? format_double(a.content_sum / a.content_n) : "NA") + "\n";
  }
  rep.timing_csv = "converter,total_wall_time_s\n";
  for (const auto& [name, a] : by_converter)
    rep.timing_csv += name + "," + format_double(a.wall) + "\n";

  rep.plot_csv = "converter,entry_id,success,presentation_distance,content_distance\n";
  for (const EvalResult& r : results) {
    rep.plot_csv += r.converter + "," + std::to_string(r.entry_id) + "," +
                    (r.success ? "1" : "0") + ",";
    rep.plot_csv += r.presentation_distance ? format_double(*r.presentation_distance) : "failure";
    rep.plot_csv += ",";
    switch (r.content_state) {
      case ContentState::Value: rep.plot_csv += format_double(r.content_distance); break;
      case ContentState::Failure: rep.plot_csv += "failure"; break;
      case ContentState::Absent: rep.plot_csv += "NA"; break;
    }
    rep.plot_csv += "\n";
  }
  return rep;
}

}  // namespace mathcvt
