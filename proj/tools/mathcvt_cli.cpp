// Command-line front end: convert TeX to parallel MathML, evaluate converters
// against a gold file, aggregate result files into reports, and write the
// bundled fixtures.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mathcvt/error.hpp"
#include "mathcvt/eval.hpp"
#include "mathcvt/fixture.hpp"
#include "mathcvt/ted.hpp"

using namespace mathcvt;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::IoError, "cannot write " + path);
  out << content;
}

RefinementConfig parse_refine(const std::string& spec, bool& use_context) {
  RefinementConfig cfg = RefinementConfig::all_off();
  use_context = false;
  std::stringstream ss(spec);
  std::string flag;
  while (std::getline(ss, flag, ',')) {
    if (flag == "all") {
      cfg = RefinementConfig::all_on();
      use_context = true;
    } else if (flag == "none") {
      cfg = RefinementConfig::all_off();
      use_context = false;
    } else if (flag == "power") {
      cfg.power_rule = true;
    } else if (flag == "subscript") {
      cfg.subscript_rule = true;
    } else if (flag == "apply") {
      cfg.function_apply_rule = true;
    } else if (flag == "einstein") {
      cfg.einstein_detection = true;
    } else if (flag == "mlp") {
      use_context = true;
    } else {
      raise(ErrorKind::FormatError, "unknown refinement flag '" + flag + "'");
    }
  }
  return cfg;
}

CostModel parse_costs(const std::string& spec) {
  CostModel cm;
  std::stringstream ss(spec);
  std::string part;
  std::vector<double> vals;
  while (std::getline(ss, part, ',')) vals.push_back(std::stod(part));
  if (vals.size() < 3 || vals.size() > 4)
    raise(ErrorKind::FormatError, "--costs expects i,d,r[,e]");
  cm.insert_cost = vals[0];
  cm.delete_cost = vals[1];
  cm.rename_cost = vals[2];
  if (vals.size() == 4) cm.shortcut_cost = vals[3];
  return cm;
}

Pipeline make_pipeline(const std::string& lexicon_path, const std::string& registry_path) {
  MacroRegistry registry = builtin_registry();
  register_table1_macros(registry);
  parse_registry_text(registry, fixture_registry_text(), "bundled-registry");
  if (!registry_path.empty()) load_registry_file(registry, registry_path);
  Lexicon lexicon = lexicon_path.empty() ? parse_lexicon(fixture_lexicon_text(), "bundled-lexicon")
                                         : load_lexicon(lexicon_path);
  return Pipeline(std::move(registry), std::move(lexicon));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LaTeX to parallel-MathML converter and conversion benchmark"};
  app.require_subcommand(1);

  // convert
  std::string tex;
  std::string context_file;
  std::string lexicon_path, registry_path;
  std::string refine_spec = "all";
  bool no_content = false;
  auto* convert = app.add_subcommand("convert", "convert a TeX expression to MathML");
  convert->add_option("tex", tex, "math-mode TeX (use '-' for stdin)");
  convert->add_option("--context", context_file, "text file with the formula's context");
  convert->add_option("--lexicon", lexicon_path, "lexicon TSV (default: bundled)");
  convert->add_option("--registry", registry_path, "extra macro registry TSV");
  convert->add_option("--refine", refine_spec, "all|none|comma list of power,subscript,apply,einstein,mlp");
  convert->add_flag("--no-content", no_content, "emit presentation markup only");

  // eval
  std::string gold_path, adapters_path, out_path = "results.jsonl";
  std::string costs_spec = "1,1,0";
  std::string shortcuts_path;
  int jobs = 1;
  double timeout = 0.0;  // 0: keep each adapter's configured timeout
  auto* eval_cmd = app.add_subcommand("eval", "evaluate converters against a gold file");
  eval_cmd->add_option("--gold", gold_path, "gold JSONL file")->required();
  eval_cmd->add_option("--adapters", adapters_path, "adapter config JSON");
  eval_cmd->add_option("--costs", costs_spec, "edit costs i,d,r[,e]");
  eval_cmd->add_option("--shortcuts", shortcuts_path, "shortcut rule file");
  eval_cmd->add_option("--refine", refine_spec, "refinement flags for the internal converter");
  eval_cmd->add_option("--lexicon", lexicon_path, "lexicon TSV (default: bundled)");
  eval_cmd->add_option("--registry", registry_path, "extra macro registry TSV");
  eval_cmd->add_option("--jobs", jobs, "parallel evaluation workers");
  eval_cmd->add_option("--timeout", timeout, "override every adapter timeout (seconds)");
  eval_cmd->add_option("--out", out_path, "results JSONL output path");

  // report
  std::string results_path, report_dir = ".";
  auto* report_cmd = app.add_subcommand("report", "aggregate a results file into CSV reports");
  report_cmd->add_option("--results", results_path, "results JSONL")->required();
  report_cmd->add_option("--out-dir", report_dir, "directory for report.csv/timing.csv/plot.csv");

  // fixture
  std::string fixture_dir = "fixtures";
  auto* fixture_cmd = app.add_subcommand("fixture", "write the bundled fixture files");
  fixture_cmd->add_option("--out", fixture_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*convert) {
      if (tex == "-" || tex.empty()) {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        tex = buf.str();
        while (!tex.empty() && (tex.back() == '\n' || tex.back() == '\r')) tex.pop_back();
      }
      if (tex.find_first_not_of(" \t") == std::string::npos) {
        std::cerr << "error: empty input\n";
        return 2;
      }
      PipelineOptions opts;
      opts.refine = parse_refine(refine_spec, opts.use_context);
      opts.content = !no_content;
      std::string context = context_file.empty() ? "" : read_file(context_file);
      Pipeline pipeline = make_pipeline(lexicon_path, registry_path);
      Pipeline::Result result = pipeline.convert(tex, context, opts);
      if (!no_content && !result.content)
        std::cerr << "note: content markup unavailable: " << result.content_error << "\n";
      std::cout << emit(result.markup);
      return 0;
    }
    if (*eval_cmd) {
      EvalOptions opts;
      opts.cost_model = parse_costs(costs_spec);
      if (!shortcuts_path.empty()) opts.rules = load_rules(shortcuts_path);
      opts.refine = parse_refine(refine_spec, opts.use_context);
      opts.jobs = jobs;
      Pipeline pipeline = make_pipeline(lexicon_path, registry_path);
      std::vector<GoldEntry> gold = load_gold(gold_path, pipeline.registry());
      std::vector<ConverterAdapter> adapters;
      if (!adapters_path.empty()) adapters = load_adapters(adapters_path);
      for (auto& a : adapters)
        if (timeout > 0) a.timeout_s = timeout;
      std::vector<EvalResult> results = run_eval(gold, adapters, pipeline, opts);
      write_results_jsonl(out_path, results);
      std::cout << "wrote " << results.size() << " results to " << out_path << "\n";
      return 0;
    }
    if (*report_cmd) {
      std::vector<EvalResult> results = read_results_jsonl(results_path);
      Report rep = report(results);
      std::filesystem::create_directories(report_dir);
      write_file(report_dir + "/report.csv", rep.summary_csv);
      write_file(report_dir + "/timing.csv", rep.timing_csv);
      write_file(report_dir + "/plot.csv", rep.plot_csv);
      std::cout << "wrote report.csv, timing.csv, plot.csv to " << report_dir << "\n";
      return 0;
    }
    if (*fixture_cmd) {
      std::filesystem::create_directories(fixture_dir);
      write_fixtures(fixture_dir);
      std::cout << "wrote fixtures to " << fixture_dir << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
