#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mathcvt/expr_tree.hpp"

namespace mathcvt {

/// Presentation and content trees with cross-references between node ids.
/// Ids are unique per tree; the xref map is injective in both directions.
struct ParallelMarkup {
  std::optional<ExprNode> presentation;
  std::optional<ExprNode> content;
  std::vector<std::pair<int, int>> xrefs;  // (presentation id, content id), sorted

  bool operator==(const ParallelMarkup&) const = default;

  /// Throws ParseError when an invariant is broken.
  void validate() const;
};

/// Numbers presentation tokens 1..n in reading order and content nodes n+1..
/// in preorder, then derives the xref map from the contentizer's srcid
/// attributes (which are consumed here).
ParallelMarkup build_parallel(ExprNode presentation, std::optional<ExprNode> content);

/// Serializes to MathML: math > semantics > (presentation, annotation-xml
/// encoding="MathML-Content"). Content-dictionary symbols become csymbol
/// elements whose text is the symbol id. Deterministic byte-for-byte.
std::string emit(const ParallelMarkup& pm);

/// Inverse of emit for documents this toolkit wrote; tolerant reader for
/// foreign MathML (unknown elements become generic nodes, never dropped).
/// Throws XmlError on malformed input, NotMathML when the root is not math.
ParallelMarkup parse_mathml(const std::string& xml);

/// Any well-formed XML as a generic tree, for scoring converters that emit
/// non-MathML markup.
ExprNode tree_from_xml(const std::string& xml);

/// Collapses attribute-free single-child rows and expands mfenced into
/// explicit fence/separator tokens. Idempotent.
ExprNode normalize_presentation(const ExprNode& tree);

/// True for labels that serialize as dedicated content-markup elements
/// (eq, plus, divide, ...).
bool content_element_label(const std::string& label);

}  // namespace mathcvt
