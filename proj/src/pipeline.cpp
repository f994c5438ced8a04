#include "mathcvt/pipeline.hpp"

#include "mathcvt/error.hpp"
#include "mathcvt/latex_parser.hpp"
#include "mathcvt/latex_tokens.hpp"

namespace mathcvt {

namespace {

const char* glyph_macro(const std::string& sup_label) {
  if (sup_label == "\\dagger") return "\\adjoint";
  if (sup_label == "\\prime") return "\\transform";
  if (sup_label == "\\circ") return "\\degreeof";
  return nullptr;
}

}  // namespace

ReadingMap Pipeline::readings_for(const ExprNode& presentation, const std::string& tex,
                                  const std::string& context_text,
                                  const PipelineOptions& opts) const {
  ReadingMap readings;

  for (const ExprNode* n : preorder(presentation)) {
    // Context-free dictionary readings apply to symbol commands only; plain
    // letter identifiers are inherently polysemous and bind through their
    // textual context below.
    if (n->is_leaf() && n->kind == NodeKind::Command) {
      const auto& found = lexicon_.lookup(n->label);
      if (!found.empty()) {
        auto& rs = readings[n->id];
        for (const auto& lr : found) rs.push_back(Reading{lr.role, lr.annotation});
      }
    }
    // postfix operation glyphs resolve through the registry's macro bindings
    if (n->kind == NodeKind::Script && !n->has_attr("macro")) {
      const std::string* which = n->attr("script");
      if (which && *which == "sup" && n->children.size() == 2) {
        const ExprNode& sup = n->children[1];
        if (sup.is_leaf()) {
          if (const char* macro = glyph_macro(sup.label)) {
            // annotation for the lifted head; the scripted token itself does
            // not become an applicable function
            if (const MacroDef* def = registry_.find(macro); def && def->annotation)
              readings[n->id] = {Reading{SymbolRole::Identifier, def->annotation}};
          }
        }
      }
    }
  }

  if (!opts.use_context || context_text.find_first_not_of(" \t\r\n") == std::string::npos)
    return readings;

  ContextDocument doc = context_text.find('<') == 0 ? context_from_xhtml(context_text)
                                                    : context_from_text(context_text);
  // the formula under conversion is the target; append it when not inline
  int target = -1;
  for (size_t k = 0; k < doc.formulae.size(); ++k)
    if (doc.formulae[k].second == tex) target = static_cast<int>(k);
  if (target < 0) {
    // formula positions are source offsets, which outrun the squeezed text;
    // the appended target must sort after every inline formula
    size_t tail = doc.text.size() + 1;
    if (!doc.formulae.empty()) tail = std::max(tail, doc.formulae.back().first + 1);
    doc.formulae.emplace_back(tail, tex);
    target = static_cast<int>(doc.formulae.size()) - 1;
  }
  doc.target_index = target;

  std::vector<DefiniensCandidate> cands = extract_candidates(doc, registry_, opts.mlp);
  cands.erase(std::remove_if(cands.begin(), cands.end(),
                             [&](const DefiniensCandidate& c) {
                               return c.score < opts.mlp.threshold;
                             }),
              cands.end());
  auto resolved = filter_with_lexicon(cands, lexicon_);
  for (const auto& [ident, res] : resolved) {
    if (res.definiens.empty()) continue;  // no surviving definiens: keep defaults
    for (const ExprNode* n : preorder(presentation)) {
      if (!n->is_leaf()) continue;
      if (n->kind != NodeKind::Identifier && n->kind != NodeKind::Command) continue;
      if (n->label != ident) continue;
      readings[n->id] = {Reading{res.role, res.annotation}};
    }
  }
  return readings;
}

Pipeline::Result Pipeline::convert(const std::string& tex, const std::string& context_text,
                                   const PipelineOptions& opts) const {
  Result result;
  std::string clean = strip_formatting(tex);
  if (clean.empty()) raise(ErrorKind::ParseError, "empty input");
  result.presentation = parse_latex(clean, registry_);

  if (opts.content) {
    try {
      ReadingMap readings = readings_for(result.presentation, tex, context_text, opts);
      result.content = contentize(result.presentation, readings, opts.refine);
    } catch (const Error& e) {
      result.content.reset();
      result.content_error = e.what();
    }
  }
  result.markup = build_parallel(result.presentation, result.content);
  return result;
}

}  // namespace mathcvt
