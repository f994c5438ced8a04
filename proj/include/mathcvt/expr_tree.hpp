#pragma once

#include <map>
#include <string>
#include <vector>

namespace mathcvt {

// Node classes shared by presentation trees, content trees and generic XML
// trees. Row is pure layout and does not count as a token; everything else
// does.
enum class NodeKind {
  Identifier,
  Number,
  Operator,
  Relation,
  Fence,
  Text,
  Command,   // \zeta, \Gamma, macro heads
  Row,       // transparent layout grouping (mrow)
  Script,    // base with sub/sup attachments
  Fraction,  // \frac, \sfrac
  Radical,   // \sqrt
  Table,     // multi-case layout
  Apply,     // application with a compound head (head is child 0)
  Generic,   // foreign / unknown elements kept verbatim
};

const char* to_string(NodeKind kind);

/// Ordered labeled tree. The one structure used for presentation markup,
/// content markup and third-party XML output alike.
struct ExprNode {
  std::string label;
  NodeKind kind = NodeKind::Generic;
  std::vector<ExprNode> children;
  std::map<std::string, std::string> attrs;
  int id = -1;

  ExprNode() = default;
  ExprNode(std::string lbl, NodeKind k) : label(std::move(lbl)), kind(k) {}
  ExprNode(std::string lbl, NodeKind k, std::vector<ExprNode> kids)
      : label(std::move(lbl)), kind(k), children(std::move(kids)) {}

  bool is_leaf() const { return children.empty(); }
  bool is_row() const { return kind == NodeKind::Row; }

  const std::string* attr(const std::string& key) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? nullptr : &it->second;
  }
  bool has_attr(const std::string& key) const { return attrs.count(key) != 0; }
};

/// Full structural equality: labels, kinds, attributes, ids, children.
bool operator==(const ExprNode& a, const ExprNode& b);
inline bool operator!=(const ExprNode& a, const ExprNode& b) { return !(a == b); }

/// Equality on labels and shape only (what the edit distance sees).
bool same_shape(const ExprNode& a, const ExprNode& b);

int node_count(const ExprNode& t);

/// Number of token nodes, i.e. all nodes except Row layout nodes.
int token_count(const ExprNode& t);

/// Maximum number of token nodes on a root-to-leaf path (Rows are
/// transparent). A lone token has depth 1.
int token_depth(const ExprNode& t);

/// Leaf labels in left-to-right order, Rows excluded.
std::vector<std::string> leaf_labels(const ExprNode& t);

/// Identifier/Number leaf labels only.
std::vector<std::string> symbol_leaves(const ExprNode& t);

/// Assigns ids in preorder starting at `next`; returns one past the last id.
int assign_ids(ExprNode& t, int next);

const ExprNode* find_by_id(const ExprNode& t, int id);

/// Depth (in edges) of the node with `id`, or -1 when absent.
int depth_of_id(const ExprNode& t, int id);

std::vector<const ExprNode*> preorder(const ExprNode& t);

void clear_attr(ExprNode& t, const std::string& key);

}  // namespace mathcvt
