#pragma once

#include <string>
#include <vector>

#include "mathcvt/macro_registry.hpp"
#include "mathcvt/mathml.hpp"

namespace mathcvt {

enum class FormulaType { Definition, Equation, Relation, General };

const char* to_string(FormulaType type);
FormulaType formula_type_from_string(const std::string& s);  // SchemaError on junk

/// One benchmark record of the gold file (JSON object per line).
struct GoldEntry {
  int id = 0;
  std::string name;
  FormulaType type = FormulaType::General;
  std::string original_tex;
  std::string corrected_tex;
  std::string semantic_tex;
  std::string gold_mathml;
  std::string context;    // optional prose with inline $...$ math
  std::string hyperlink;  // optional source link

  ParallelMarkup gold;  // parsed from gold_mathml at load time
};

/// Loads and validates a gold file: unique ids, corrected_tex parses,
/// gold_mathml parses; entries come back sorted by id.
/// Throws SchemaError (missing/bad field) and ParseError (bad TeX or MathML,
/// message carries the entry id).
std::vector<GoldEntry> load_gold(const std::string& path, const MacroRegistry& registry);
std::vector<GoldEntry> parse_gold(const std::string& text, const MacroRegistry& registry,
                                  const std::string& origin = "<string>");

}  // namespace mathcvt
