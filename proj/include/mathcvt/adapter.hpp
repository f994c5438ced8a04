#pragma once

#include <string>
#include <vector>

namespace mathcvt {

/// External converter invoked as a subprocess: TeX in (stdin or argv),
/// MathML on stdout, nonzero exit means failure.
struct ConverterAdapter {
  std::string name;
  std::vector<std::string> command;  // argv; "{}" expands to the TeX in arg mode
  enum class InputMode { Stdin, Arg };
  InputMode input_mode = InputMode::Stdin;
  double timeout_s = 30.0;
};

/// JSON config: [{"name": "...", "command": ["prog", "arg"],
///                "input_mode": "stdin"|"arg", "timeout": 30}, ...]
std::vector<ConverterAdapter> load_adapters(const std::string& path);
std::vector<ConverterAdapter> parse_adapters(const std::string& text,
                                             const std::string& origin = "<string>");

struct AdapterRun {
  bool ok = false;        // ran to completion with exit code 0
  bool timed_out = false;
  int exit_code = -1;
  std::string output;     // captured stdout
  std::string error;      // diagnostic for failures
  double wall_s = 0.0;
};

/// Runs one conversion, enforcing the adapter's timeout. Never throws for
/// process-level failures; those are reported in the result.
AdapterRun run_adapter(const ConverterAdapter& adapter, const std::string& tex);

}  // namespace mathcvt
