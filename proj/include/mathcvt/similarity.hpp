#pragma once

#include <map>
#include <string>

#include "mathcvt/expr_tree.hpp"

namespace mathcvt {

/// Forest of symbol classes ordered from general to specific, loaded from a
/// two-column TSV (class <TAB> parent, empty parent for roots).
class Taxonomy {
public:
  static Taxonomy from_file(const std::string& path);
  static Taxonomy from_text(const std::string& text, const std::string& origin = "<string>");

  bool contains(const std::string& cls) const { return parent_.count(cls) != 0; }
  int height() const { return height_; }

  /// Combined hop count from both classes up to their nearest common
  /// ancestor, normalized by taxonomy height and capped at 1. Same class is
  /// 0; unrelated or unknown classes are 1.
  double class_distance(const std::string& a, const std::string& b) const;

private:
  std::map<std::string, std::string> parent_;
  int height_ = 1;
};

/// Taxonomy class of a content node: its label when the taxonomy knows it,
/// integer/real for numeric literals, empty (unmapped) otherwise.
std::string taxonomy_class(const ExprNode& node, const Taxonomy& tax);

/// Distance between two annotated nodes in the class hierarchy; unmapped
/// nodes are maximally distant (1).
double taxonomic_distance(const ExprNode& x, const ExprNode& y, const Taxonomy& tax);

/// Significance weight 2^-depth of a match: 1 at the root, halving per level.
double match_depth(int node_id, const ExprNode& tree);

/// Bag-of-tokens overlap |tokens(a) ∩ tokens(b)| / |tokens(a)| over leaf
/// multisets. Throws EmptyQuery when `a` has no leaf tokens.
double query_coverage(const ExprNode& a, const ExprNode& b);

}  // namespace mathcvt
