#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mathcvt/expr_tree.hpp"
#include "mathcvt/lexicon.hpp"
#include "mathcvt/macro_registry.hpp"

namespace mathcvt {

/// One (identifier, noun phrase) pairing found near an occurrence of the
/// identifier in the running text.
struct DefiniensCandidate {
  std::string identifier;
  std::string definiens;
  double score = 0.0;
  int distance_words = 0;
  int distance_formulae = 0;
};

/// Text with the math expressions it contains; target_index selects the
/// formula being converted.
struct ContextDocument {
  std::string text;                                     // formulae removed
  std::vector<std::pair<size_t, std::string>> formulae;  // (source offset, LaTeX)
  int target_index = 0;
};

struct MlpOptions {
  double alpha = 0.75;           // weight of the word-distance component
  double lambda_words = 0.1;     // per-word decay
  double lambda_formulae = 0.5;  // per-intervening-formula decay
  int window = 10;               // max word distance considered
  double threshold = 0.5;        // minimum score for a usable candidate
};

/// score = alpha*exp(-lambda_w*d_words) + (1-alpha)*exp(-lambda_f*d_formulae)
double candidate_score(int distance_words, int distance_formulae, const MlpOptions& opt);

/// Splits plain text with inline $...$ math into a ContextDocument. The last
/// formula becomes the target unless one is selected later.
ContextDocument context_from_text(const std::string& text);

/// XHTML input: tags stripped, <math> elements turned into formula slots via
/// their TeX annotation or alttext attribute.
ContextDocument context_from_xhtml(const std::string& xhtml);

/// Identifier-definiens pairs near identifier occurrences, scored and sorted
/// descending. Empty text yields an empty list.
std::vector<DefiniensCandidate> extract_candidates(const ContextDocument& doc,
                                                   const MacroRegistry& registry,
                                                   const MlpOptions& options = {});

/// Non-identifier simple tokens of a formula (operators, relations, command
/// heads) — the annotation candidates that are not identifiers.
std::set<std::string> identify_symbols(const ExprNode& formula);

struct ResolvedDefiniens {
  std::string definiens;
  SymbolRole role = SymbolRole::Identifier;
  std::optional<SemanticAnnotation> annotation;
  double score = 0.0;
};

/// Keeps candidates whose definiens names a role (function/operator/...) or
/// matches one of the identifier's lexicon labels; the best survivor wins.
/// Identifiers with no survivor map to the default identifier role.
std::map<std::string, ResolvedDefiniens> filter_with_lexicon(
    const std::vector<DefiniensCandidate>& candidates, const Lexicon& lexicon);

}  // namespace mathcvt
