#include "mathcvt/gold.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mathcvt/error.hpp"
#include "mathcvt/latex_parser.hpp"
#include "mathcvt/latex_tokens.hpp"

namespace mathcvt {

const char* to_string(FormulaType type) {
  switch (type) {
    case FormulaType::Definition: return "definition";
    case FormulaType::Equation: return "equation";
    case FormulaType::Relation: return "relation";
    case FormulaType::General: return "general";
  }
  return "general";
}

FormulaType formula_type_from_string(const std::string& s) {
  if (s == "definition") return FormulaType::Definition;
  if (s == "equation") return FormulaType::Equation;
  if (s == "relation") return FormulaType::Relation;
  if (s == "general") return FormulaType::General;
  raise(ErrorKind::SchemaError, "unknown formula type '" + s + "'");
}

std::vector<GoldEntry> parse_gold(const std::string& text, const MacroRegistry& registry,
                                  const std::string& origin) {
  std::vector<GoldEntry> entries;
  std::set<int> ids;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorKind::SchemaError, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
    GoldEntry entry;
    auto need = [&](const char* field) -> const nlohmann::json& {
      if (!j.contains(field))
        raise(ErrorKind::SchemaError,
              origin + ":" + std::to_string(lineno) + ": missing field '" + field + "'");
      return j.at(field);
    };
    try {
      entry.id = need("id").get<int>();
      entry.type = formula_type_from_string(need("type").get<std::string>());
      entry.original_tex = need("original_tex").get<std::string>();
      entry.corrected_tex = need("corrected_tex").get<std::string>();
      entry.semantic_tex = need("semantic_tex").get<std::string>();
      entry.gold_mathml = need("gold_mathml").get<std::string>();
      if (j.contains("name")) entry.name = j.at("name").get<std::string>();
      if (j.contains("context")) entry.context = j.at("context").get<std::string>();
      if (j.contains("url")) entry.hyperlink = j.at("url").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorKind::SchemaError, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!ids.insert(entry.id).second)
      raise(ErrorKind::SchemaError,
            origin + ":" + std::to_string(lineno) + ": duplicate id " + std::to_string(entry.id));
    try {
      parse_latex(strip_formatting(entry.corrected_tex), registry);
    } catch (const Error& e) {
      raise(ErrorKind::ParseError,
            "entry " + std::to_string(entry.id) + ": corrected_tex does not parse: " + e.what());
    }
    try {
      entry.gold = parse_mathml(entry.gold_mathml);
    } catch (const Error& e) {
      raise(ErrorKind::ParseError,
            "entry " + std::to_string(entry.id) + ": gold_mathml does not parse: " + e.what());
    }
    entries.push_back(std::move(entry));
  }
  std::sort(entries.begin(), entries.end(),
            [](const GoldEntry& a, const GoldEntry& b) { return a.id < b.id; });
  return entries;
}

std::vector<GoldEntry> load_gold(const std::string& path, const MacroRegistry& registry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoError, "cannot open gold file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_gold(buf.str(), registry, path);
}

}  // namespace mathcvt
