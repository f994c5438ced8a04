#include "mathcvt/expr_tree.hpp"

#include <algorithm>

namespace mathcvt {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Identifier: return "identifier";
    case NodeKind::Number: return "number";
    case NodeKind::Operator: return "operator";
    case NodeKind::Relation: return "relation";
    case NodeKind::Fence: return "fence";
    case NodeKind::Text: return "text";
    case NodeKind::Command: return "command";
    case NodeKind::Row: return "row";
    case NodeKind::Script: return "script";
    case NodeKind::Fraction: return "fraction";
    case NodeKind::Radical: return "radical";
    case NodeKind::Table: return "table";
    case NodeKind::Apply: return "apply";
    case NodeKind::Generic: return "generic";
  }
  return "generic";
}

bool operator==(const ExprNode& a, const ExprNode& b) {
  return a.label == b.label && a.kind == b.kind && a.id == b.id && a.attrs == b.attrs &&
         a.children == b.children;
}

bool same_shape(const ExprNode& a, const ExprNode& b) {
  if (a.label != b.label || a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!same_shape(a.children[i], b.children[i])) return false;
  return true;
}

int node_count(const ExprNode& t) {
  int n = 1;
  for (const auto& c : t.children) n += node_count(c);
  return n;
}

int token_count(const ExprNode& t) {
  int n = t.is_row() ? 0 : 1;
  for (const auto& c : t.children) n += token_count(c);
  return n;
}

static int token_depth_rec(const ExprNode& t, int above) {
  int here = above + (t.is_row() ? 0 : 1);
  int best = t.is_row() ? 0 : here;
  for (const auto& c : t.children) best = std::max(best, token_depth_rec(c, here));
  return best;
}

int token_depth(const ExprNode& t) { return token_depth_rec(t, 0); }

static void leaves_rec(const ExprNode& t, std::vector<std::string>& out, bool symbols_only) {
  if (t.is_leaf()) {
    if (t.is_row()) return;
    if (symbols_only && t.kind != NodeKind::Identifier && t.kind != NodeKind::Number) return;
    out.push_back(t.label);
    return;
  }
  for (const auto& c : t.children) leaves_rec(c, out, symbols_only);
}

std::vector<std::string> leaf_labels(const ExprNode& t) {
  std::vector<std::string> out;
  leaves_rec(t, out, false);
  return out;
}

std::vector<std::string> symbol_leaves(const ExprNode& t) {
  std::vector<std::string> out;
  leaves_rec(t, out, true);
  return out;
}

int assign_ids(ExprNode& t, int next) {
  t.id = next++;
  for (auto& c : t.children) next = assign_ids(c, next);
  return next;
}

const ExprNode* find_by_id(const ExprNode& t, int id) {
  if (t.id == id) return &t;
  for (const auto& c : t.children)
    if (const ExprNode* hit = find_by_id(c, id)) return hit;
  return nullptr;
}

static int depth_rec(const ExprNode& t, int id, int depth) {
  if (t.id == id) return depth;
  for (const auto& c : t.children) {
    int d = depth_rec(c, id, depth + 1);
    if (d >= 0) return d;
  }
  return -1;
}

int depth_of_id(const ExprNode& t, int id) { return depth_rec(t, id, 0); }

static void preorder_rec(const ExprNode& t, std::vector<const ExprNode*>& out) {
  out.push_back(&t);
  for (const auto& c : t.children) preorder_rec(c, out);
}

std::vector<const ExprNode*> preorder(const ExprNode& t) {
  std::vector<const ExprNode*> out;
  preorder_rec(t, out);
  return out;
}

void clear_attr(ExprNode& t, const std::string& key) {
  t.attrs.erase(key);
  for (auto& c : t.children) clear_attr(c, key);
}

}  // namespace mathcvt
