#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mathcvt {

/// Binding of a token to a content-dictionary symbol.
struct SemanticAnnotation {
  std::string cd;         // content dictionary, e.g. "wikidata" or "local"
  std::string symbol_id;  // e.g. "Q187235"
  std::string label;      // human-readable name
  std::string description;

  /// Checks the field invariants (non-empty cd/symbol_id; wikidata ids are
  /// Q<digits>). Returns an error message or nullopt when fine.
  std::optional<std::string> validate() const;

  bool operator==(const SemanticAnnotation&) const = default;
};

enum class SymbolRole { Identifier, Function, Operator, Constant };

const char* to_string(SymbolRole role);
std::optional<SymbolRole> role_from_string(const std::string& s);

struct LexiconReading {
  SemanticAnnotation annotation;
  SymbolRole role = SymbolRole::Identifier;

  bool operator==(const LexiconReading&) const = default;
};

/// Context-free symbol dictionary. Immutable after loading; lookups never
/// mutate it.
class Lexicon {
public:
  void add(const std::string& lexeme, LexiconReading reading);  // FormatError on duplicates

  /// All context-free readings of a lexeme; empty when unknown.
  const std::vector<LexiconReading>& lookup(const std::string& lexeme) const;

  size_t size() const;
  bool contains(const std::string& lexeme) const { return entries_.count(lexeme) != 0; }

  /// True when `word` equals the label of any reading of any lexeme.
  bool has_label(const std::string& word) const;

  /// Readings of `lexeme` whose label equals `word` (case-insensitive).
  std::vector<LexiconReading> readings_labeled(const std::string& lexeme,
                                               const std::string& word) const;

private:
  std::map<std::string, std::vector<LexiconReading>> entries_;
};

/// Loads the tab-separated lexicon format:
///   lexeme <TAB> role <TAB> cd <TAB> symbol_id <TAB> label [<TAB> description]
/// Blank lines and lines starting with '#' are skipped.
/// Throws FormatError with the offending line number.
Lexicon load_lexicon(const std::string& path);
Lexicon parse_lexicon(const std::string& text, const std::string& origin = "<string>");

}  // namespace mathcvt
