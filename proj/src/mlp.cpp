#include "mathcvt/mlp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mathcvt/error.hpp"
#include "mathcvt/latex_parser.hpp"
#include "mathcvt/xml.hpp"

namespace mathcvt {

double candidate_score(int distance_words, int distance_formulae, const MlpOptions& opt) {
  return opt.alpha * std::exp(-opt.lambda_words * distance_words) +
         (1.0 - opt.alpha) * std::exp(-opt.lambda_formulae * distance_formulae);
}

ContextDocument context_from_text(const std::string& text) {
  ContextDocument doc;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '$') {
      size_t end = text.find('$', i + 1);
      if (end == std::string::npos) {  // stray dollar: keep as text
        doc.text += text.substr(i);
        break;
      }
      std::string body = text.substr(i + 1, end - i - 1);
      if (body.find_first_not_of(" \t") != std::string::npos) {
        doc.formulae.emplace_back(i, body);
        doc.text += ' ';
      }
      i = end + 1;
      continue;
    }
    doc.text += text[i++];
  }
  doc.target_index = doc.formulae.empty() ? 0 : static_cast<int>(doc.formulae.size()) - 1;
  return doc;
}

namespace {

void walk_xhtml(const XmlNode& node, ContextDocument& doc, size_t& cursor) {
  if (node.type == XmlNode::Type::Text) {
    doc.text += node.text;
    cursor += node.text.size();
    return;
  }
  if (node.name == "math" || node.name.ends_with(":math")) {
    // prefer an explicit TeX annotation, fall back to alttext
    std::string tex;
    std::vector<const XmlNode*> stack{&node};
    while (!stack.empty() && tex.empty()) {
      const XmlNode* cur = stack.back();
      stack.pop_back();
      if (cur->name == "annotation") {
        const std::string* enc = cur->attr("encoding");
        if (enc && enc->find("tex") != std::string::npos) tex = cur->inner_text();
      }
      for (const auto& c : cur->children)
        if (c.type == XmlNode::Type::Element) stack.push_back(&c);
    }
    if (tex.empty()) {
      if (const std::string* alt = node.attr("alttext")) tex = *alt;
    }
    if (!tex.empty()) {
      doc.formulae.emplace_back(cursor, tex);
      doc.text += ' ';
      ++cursor;
    }
    return;
  }
  if (node.name == "script" || node.name == "style") return;
  for (const auto& c : node.children) walk_xhtml(c, doc, cursor);
  // block-level elements separate words
  doc.text += ' ';
  ++cursor;
}

}  // namespace

ContextDocument context_from_xhtml(const std::string& xhtml) {
  XmlNode root = xml_parse(xhtml);
  ContextDocument doc;
  size_t cursor = 0;
  walk_xhtml(root, doc, cursor);
  doc.target_index = doc.formulae.empty() ? 0 : static_cast<int>(doc.formulae.size()) - 1;
  return doc;
}

namespace {

struct Slot {
  std::string word;     // lowercase for matching
  std::string surface;  // original spelling
  int formula = -1;     // index into doc.formulae, -1 for words
  size_t position = 0;
};

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

const std::set<std::string>& noun_dictionary() {
  static const std::set<std::string> nouns = {
      "function",  "energy",   "mass",       "speed",     "light",      "value",
      "constant",  "variable", "operator",   "matrix",    "vector",     "number",
      "distance",  "force",    "velocity",   "momentum",  "wavelength", "frequency",
      "field",     "charge",   "current",    "pressure",  "volume",     "density",
      "probability", "expectation", "polynomial", "integer", "area",    "temperature",
      "angle",     "sequence", "series",     "sum",       "product",    "term",
      "coefficient", "index",  "parameter",  "transformation", "expected"};
  return nouns;
}

const std::set<std::string>& stop_words() {
  static const std::set<std::string> stops = {
      "is",    "are",   "was",    "were",  "be",     "been",   "denotes", "denote",
      "denoted", "represents", "represent", "stands", "means", "equals", "defined",
      "defines", "called", "given", "where", "with",  "for",   "and",    "or",
      "in",    "on",    "to",     "we",    "by",     "as",     "it",     "that",
      "this",  "then",  "holds",  "maps",  "takes",  "gives",  "let",    "if",
      "its",   "their", "there",  "which", "when",   "above",  "below",  "over"};
  return stops;
}

bool is_determiner(const std::string& w) { return w == "the" || w == "a" || w == "an"; }

bool noun_like(const Slot& slot) {
  if (slot.formula >= 0) return false;
  const std::string& w = slot.word;
  if (w.size() < 2) return false;
  if (is_determiner(w) || stop_words().count(w)) return false;
  if (noun_dictionary().count(w)) return true;
  // capitalized mid-sentence words read as named concepts
  if (std::isupper(static_cast<unsigned char>(slot.surface[0]))) return true;
  return false;
}

std::vector<Slot> build_slots(const ContextDocument& doc) {
  std::vector<Slot> slots;
  size_t i = 0;
  const std::string& text = doc.text;
  std::vector<std::pair<size_t, int>> formula_at;
  for (size_t k = 0; k < doc.formulae.size(); ++k)
    formula_at.emplace_back(doc.formulae[k].first, static_cast<int>(k));
  size_t next_formula = 0;
  size_t consumed_src = 0;  // rough running offset in the source
  while (i <= text.size()) {
    while (next_formula < formula_at.size() && formula_at[next_formula].first <= consumed_src) {
      Slot s;
      s.formula = formula_at[next_formula].second;
      s.position = formula_at[next_formula].first;
      slots.push_back(s);
      ++next_formula;
    }
    if (i == text.size()) break;
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isalnum(c)) {
      size_t start = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '-'))
        ++i;
      Slot s;
      s.surface = text.substr(start, i - start);
      s.word = lowercase(s.surface);
      s.position = start;
      consumed_src = start + s.surface.size();
      slots.push_back(s);
      continue;
    }
    ++consumed_src;
    ++i;
  }
  // formulae not yet placed (positions past the text) go to the end
  while (next_formula < formula_at.size()) {
    Slot s;
    s.formula = formula_at[next_formula].second;
    s.position = formula_at[next_formula].first;
    slots.push_back(s);
    ++next_formula;
  }
  std::stable_sort(slots.begin(), slots.end(),
                   [](const Slot& a, const Slot& b) { return a.position < b.position; });
  return slots;
}

struct NounPhrase {
  std::string phrase;
  int slot_index;
};

std::vector<NounPhrase> find_noun_phrases(const std::vector<Slot>& slots) {
  std::vector<NounPhrase> out;
  auto push_unique = [&](const std::string& phrase, int idx) {
    for (const auto& np : out)
      if (np.phrase == phrase && np.slot_index == idx) return;
    out.push_back({phrase, idx});
  };
  for (size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].formula >= 0) continue;
    if (is_determiner(slots[i].word)) {
      std::string phrase;
      size_t j = i + 1;
      int words = 0;
      int anchor = -1;
      while (j < slots.size() && words < 4) {
        if (noun_like(slots[j]) ||
            (slots[j].word == "of" && !phrase.empty() && j + 1 < slots.size() &&
             noun_like(slots[j + 1]))) {
          if (!phrase.empty()) phrase += ' ';
          phrase += slots[j].word;
          if (anchor < 0) anchor = static_cast<int>(j);
          ++words;
          ++j;
          continue;
        }
        break;
      }
      if (!phrase.empty()) push_unique(phrase, anchor);
    }
    if (noun_like(slots[i]) && noun_dictionary().count(slots[i].word))
      push_unique(slots[i].word, static_cast<int>(i));
  }
  return out;
}

std::set<std::string> formula_identifiers(const std::string& tex, const MacroRegistry& reg) {
  std::set<std::string> ids;
  try {
    ExprNode tree = parse_latex(tex, reg);
    for (const ExprNode* n : preorder(tree))
      if (n->kind == NodeKind::Identifier || n->kind == NodeKind::Command)
        if (n->is_leaf() && !n->has_attr("form")) ids.insert(n->label);
  } catch (const Error&) {
    // unusable context formula: contributes no identifiers
  }
  return ids;
}

}  // namespace

std::vector<DefiniensCandidate> extract_candidates(const ContextDocument& doc,
                                                   const MacroRegistry& registry,
                                                   const MlpOptions& options) {
  std::vector<DefiniensCandidate> out;
  if (doc.text.find_first_not_of(" \t\r\n") == std::string::npos) return out;
  if (doc.formulae.empty()) return out;
  size_t target = static_cast<size_t>(doc.target_index);
  if (target >= doc.formulae.size()) return out;

  std::set<std::string> idents = formula_identifiers(doc.formulae[target].second, registry);
  if (idents.empty()) return out;

  std::vector<Slot> slots = build_slots(doc);
  std::vector<NounPhrase> nps = find_noun_phrases(slots);

  // occurrences of each identifier: matching words, or single-token formulae
  std::map<std::string, std::vector<int>> occurrences;
  for (size_t i = 0; i < slots.size(); ++i) {
    const Slot& s = slots[i];
    if (s.formula >= 0) {
      std::string tex = doc.formulae[static_cast<size_t>(s.formula)].second;
      // trim
      size_t b = tex.find_first_not_of(" \t");
      size_t e = tex.find_last_not_of(" \t");
      if (b == std::string::npos) continue;
      tex = tex.substr(b, e - b + 1);
      if (idents.count(tex)) occurrences[tex].push_back(static_cast<int>(i));
      continue;
    }
    if (idents.count(s.surface)) occurrences[s.surface].push_back(static_cast<int>(i));
  }

  std::map<std::pair<std::string, std::string>, DefiniensCandidate> best;
  for (const auto& [ident, places] : occurrences) {
    for (int place : places) {
      for (const auto& np : nps) {
        int dw = std::abs(np.slot_index - place);
        if (dw == 0 || dw > options.window) continue;
        int df = 0;
        int lo = std::min(np.slot_index, place), hi = std::max(np.slot_index, place);
        for (int k = lo + 1; k < hi; ++k)
          if (slots[static_cast<size_t>(k)].formula >= 0) ++df;
        DefiniensCandidate cand{ident, np.phrase, candidate_score(dw, df, options), dw, df};
        auto key = std::make_pair(ident, np.phrase);
        auto it = best.find(key);
        if (it == best.end() || cand.score > it->second.score) best[key] = cand;
      }
    }
  }
  for (auto& [_, cand] : best) out.push_back(std::move(cand));
  std::sort(out.begin(), out.end(), [](const DefiniensCandidate& a, const DefiniensCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.identifier != b.identifier) return a.identifier < b.identifier;
    return a.definiens < b.definiens;
  });
  return out;
}

std::set<std::string> identify_symbols(const ExprNode& formula) {
  std::set<std::string> out;
  for (const ExprNode* n : preorder(formula)) {
    if (n->kind == NodeKind::Operator || n->kind == NodeKind::Relation ||
        n->kind == NodeKind::Command)
      out.insert(n->label);
  }
  return out;
}

std::map<std::string, ResolvedDefiniens> filter_with_lexicon(
    const std::vector<DefiniensCandidate>& candidates, const Lexicon& lexicon) {
  std::map<std::string, ResolvedDefiniens> out;
  for (const auto& cand : candidates) {
    if (out.count(cand.identifier)) continue;  // input sorted: first survivor wins
    std::string def = cand.definiens;
    std::transform(def.begin(), def.end(), def.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (auto role = role_from_string(def)) {
      out[cand.identifier] = {cand.definiens, *role, std::nullopt, cand.score};
      continue;
    }
    auto readings = lexicon.readings_labeled(cand.identifier, def);
    if (!readings.empty()) {
      out[cand.identifier] = {cand.definiens, readings[0].role, readings[0].annotation,
                              cand.score};
      continue;
    }
  }
  // identifiers with no surviving definiens default to plain identifiers
  for (const auto& cand : candidates)
    if (!out.count(cand.identifier))
      out[cand.identifier] = {"", SymbolRole::Identifier, std::nullopt, 0.0};
  return out;
}

}  // namespace mathcvt
