#include "mathcvt/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "mathcvt/error.hpp"

namespace mathcvt {

std::optional<std::string> SemanticAnnotation::validate() const {
  if (cd.empty()) return "empty content dictionary";
  if (symbol_id.empty()) return "empty symbol id";
  if (cd == "wikidata") {
    if (symbol_id[0] != 'Q' || symbol_id.size() < 2) return "wikidata id must be Q<digits>: " + symbol_id;
    for (size_t i = 1; i < symbol_id.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(symbol_id[i])))
        return "wikidata id must be Q<digits>: " + symbol_id;
  }
  return std::nullopt;
}

const char* to_string(SymbolRole role) {
  switch (role) {
    case SymbolRole::Identifier: return "identifier";
    case SymbolRole::Function: return "function";
    case SymbolRole::Operator: return "operator";
    case SymbolRole::Constant: return "constant";
  }
  return "identifier";
}

std::optional<SymbolRole> role_from_string(const std::string& s) {
  if (s == "identifier") return SymbolRole::Identifier;
  if (s == "function") return SymbolRole::Function;
  if (s == "operator") return SymbolRole::Operator;
  if (s == "constant") return SymbolRole::Constant;
  return std::nullopt;
}

namespace {
std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}
}  // namespace

void Lexicon::add(const std::string& lexeme, LexiconReading reading) {
  if (auto err = reading.annotation.validate())
    raise(ErrorKind::FormatError, *err + " (lexeme " + lexeme + ")");
  auto& readings = entries_[lexeme];
  for (const auto& r : readings)
    if (r.annotation == reading.annotation)
      raise(ErrorKind::FormatError, "duplicate reading for lexeme " + lexeme);
  readings.push_back(std::move(reading));
}

const std::vector<LexiconReading>& Lexicon::lookup(const std::string& lexeme) const {
  static const std::vector<LexiconReading> empty;
  auto it = entries_.find(lexeme);
  return it == entries_.end() ? empty : it->second;
}

size_t Lexicon::size() const {
  size_t n = 0;
  for (const auto& [_, readings] : entries_) n += readings.size();
  return n;
}

bool Lexicon::has_label(const std::string& word) const {
  std::string w = lowercase(word);
  for (const auto& [_, readings] : entries_)
    for (const auto& r : readings)
      if (lowercase(r.annotation.label) == w) return true;
  return false;
}

std::vector<LexiconReading> Lexicon::readings_labeled(const std::string& lexeme,
                                                      const std::string& word) const {
  std::vector<LexiconReading> out;
  std::string w = lowercase(word);
  for (const auto& r : lookup(lexeme))
    if (lowercase(r.annotation.label) == w) out.push_back(r);
  return out;
}

Lexicon parse_lexicon(const std::string& text, const std::string& origin) {
  Lexicon lex;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    size_t start = 0;
    for (;;) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() < 5)
      raise(ErrorKind::FormatError,
            origin + ":" + std::to_string(lineno) + ": expected at least 5 tab-separated fields");
    auto role = role_from_string(fields[1]);
    if (!role)
      raise(ErrorKind::FormatError,
            origin + ":" + std::to_string(lineno) + ": unknown role '" + fields[1] + "'");
    LexiconReading reading;
    reading.role = *role;
    reading.annotation = SemanticAnnotation{fields[2], fields[3], fields[4],
                                            fields.size() > 5 ? fields[5] : ""};
    try {
      lex.add(fields[0], std::move(reading));
    } catch (const Error& e) {
      raise(ErrorKind::FormatError, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoError, "cannot open lexicon file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str(), path);
}

}  // namespace mathcvt
