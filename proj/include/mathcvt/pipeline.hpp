#pragma once

#include <optional>
#include <string>

#include "mathcvt/contentizer.hpp"
#include "mathcvt/lexicon.hpp"
#include "mathcvt/macro_registry.hpp"
#include "mathcvt/mathml.hpp"
#include "mathcvt/mlp.hpp"

namespace mathcvt {

struct PipelineOptions {
  RefinementConfig refine;
  bool use_context = true;  // definiens extraction + lexicon filtering
  bool content = true;      // attempt content markup at all
  MlpOptions mlp;
};

/// LaTeX (+ optional textual context) to parallel markup. Immutable after
/// construction; conversions are pure and safe to run concurrently.
class Pipeline {
public:
  Pipeline(MacroRegistry registry, Lexicon lexicon)
      : registry_(std::move(registry)), lexicon_(std::move(lexicon)) {}

  const MacroRegistry& registry() const { return registry_; }
  const Lexicon& lexicon() const { return lexicon_; }

  struct Result {
    ExprNode presentation;            // parse ids, before renumbering
    std::optional<ExprNode> content;  // absent when disabled or failed
    std::string content_error;       // diagnostic when content failed
    ParallelMarkup markup;
  };

  /// Throws on unparsable TeX; content-stage problems are reported in
  /// Result::content_error instead of failing the conversion.
  Result convert(const std::string& tex, const std::string& context_text,
                 const PipelineOptions& opts) const;

  /// Context-free lexicon readings, postfix-glyph annotations resolved
  /// through the registry, and (optionally) context-derived overrides.
  ReadingMap readings_for(const ExprNode& presentation, const std::string& tex,
                          const std::string& context_text, const PipelineOptions& opts) const;

private:
  MacroRegistry registry_;
  Lexicon lexicon_;
};

}  // namespace mathcvt
