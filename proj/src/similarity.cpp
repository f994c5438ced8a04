#include "mathcvt/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "mathcvt/error.hpp"

namespace mathcvt {

Taxonomy Taxonomy::from_text(const std::string& text, const std::string& origin) {
  Taxonomy tax;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    std::string cls = tab == std::string::npos ? line : line.substr(0, tab);
    std::string parent = tab == std::string::npos ? "" : line.substr(tab + 1);
    if (cls.empty())
      raise(ErrorKind::FormatError, origin + ":" + std::to_string(lineno) + ": empty class");
    if (tax.parent_.count(cls))
      raise(ErrorKind::FormatError,
            origin + ":" + std::to_string(lineno) + ": duplicate class " + cls);
    tax.parent_[cls] = parent;
  }
  // depth check doubles as cycle detection
  int max_depth = 0;
  for (const auto& [cls, _] : tax.parent_) {
    int depth = 0;
    std::string cur = cls;
    while (!tax.parent_.at(cur).empty()) {
      cur = tax.parent_.at(cur);
      if (!tax.parent_.count(cur))
        raise(ErrorKind::FormatError, origin + ": unknown parent " + cur);
      if (++depth > static_cast<int>(tax.parent_.size()))
        raise(ErrorKind::FormatError, origin + ": cycle at class " + cls);
    }
    max_depth = std::max(max_depth, depth);
  }
  tax.height_ = std::max(1, max_depth);
  return tax;
}

Taxonomy Taxonomy::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoError, "cannot open taxonomy file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), path);
}

double Taxonomy::class_distance(const std::string& a, const std::string& b) const {
  if (!contains(a) || !contains(b)) return 1.0;
  if (a == b) return 0.0;
  std::vector<std::string> chain_a;
  for (std::string cur = a;; cur = parent_.at(cur)) {
    chain_a.push_back(cur);
    if (parent_.at(cur).empty()) break;
  }
  std::string cur = b;
  int up_b = 0;
  for (;;) {
    auto it = std::find(chain_a.begin(), chain_a.end(), cur);
    if (it != chain_a.end()) {
      int up_a = static_cast<int>(it - chain_a.begin());
      return std::min(1.0, static_cast<double>(up_a + up_b) / height_);
    }
    if (parent_.at(cur).empty()) break;
    cur = parent_.at(cur);
    ++up_b;
  }
  return 1.0;  // different roots of the forest
}

std::string taxonomy_class(const ExprNode& node, const Taxonomy& tax) {
  if (tax.contains(node.label)) return node.label;
  if (node.kind == NodeKind::Number) {
    bool integral = node.label.find('.') == std::string::npos;
    std::string cls = integral ? "integer" : "real";
    if (tax.contains(cls)) return cls;
  }
  return "";
}

double taxonomic_distance(const ExprNode& x, const ExprNode& y, const Taxonomy& tax) {
  std::string cx = taxonomy_class(x, tax);
  std::string cy = taxonomy_class(y, tax);
  if (cx.empty() || cy.empty()) return 1.0;
  return tax.class_distance(cx, cy);
}

double match_depth(int node_id, const ExprNode& tree) {
  int depth = depth_of_id(tree, node_id);
  if (depth < 0) raise(ErrorKind::ParseError, "node id not in tree: " + std::to_string(node_id));
  return std::exp2(-static_cast<double>(depth));
}

double query_coverage(const ExprNode& a, const ExprNode& b) {
  std::vector<std::string> qa = leaf_labels(a);
  if (qa.empty()) raise(ErrorKind::EmptyQuery, "query tree has no leaf tokens");
  std::vector<std::string> qb = leaf_labels(b);
  std::sort(qa.begin(), qa.end());
  std::sort(qb.begin(), qb.end());
  std::vector<std::string> common;
  std::set_intersection(qa.begin(), qa.end(), qb.begin(), qb.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(qa.size());
}

}  // namespace mathcvt
