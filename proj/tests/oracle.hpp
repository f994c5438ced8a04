#pragma once

// Independent reference for the ordered tree edit distance, used to check the
// dynamic program. Enumerates every order- and ancestry-preserving node
// mapping between two small trees (subset pairs aligned by postorder) and
// takes the cheapest one. Exponential, fine for trees up to ~10 nodes.

#include <bit>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mathcvt/expr_tree.hpp"
#include "mathcvt/ted.hpp"

namespace oracle {

struct FlatTree {
  std::vector<std::string> label;  // postorder
  std::vector<int> pre;            // preorder rank per postorder index
  int n = 0;

  explicit FlatTree(const mathcvt::ExprNode& root) {
    int pre_counter = 0;
    build(root, pre_counter);
    n = static_cast<int>(label.size());
  }

  void build(const mathcvt::ExprNode& node, int& pre_counter) {
    int my_pre = pre_counter++;
    for (const auto& c : node.children) build(c, pre_counter);
    label.push_back(node.label);
    pre.push_back(my_pre);
  }

  // relation categories between two distinct nodes (postorder indices)
  // 0: a left of b, 1: b left of a, 2: a ancestor of b, 3: b ancestor of a
  int relation(int a, int b) const {
    bool post_ab = a < b;
    bool pre_ab = pre[a] < pre[b];
    if (pre_ab && post_ab) return 0;
    if (!pre_ab && !post_ab) return 1;
    if (pre_ab && !post_ab) return 2;
    return 3;
  }
};

inline double ted(const mathcvt::ExprNode& ta, const mathcvt::ExprNode& tb,
                  const mathcvt::CostModel& cm) {
  FlatTree a(ta), b(tb);
  double best = std::numeric_limits<double>::infinity();
  const uint32_t limit_a = 1u << a.n;
  const uint32_t limit_b = 1u << b.n;
  std::vector<int> pick_a, pick_b;
  for (uint32_t ma = 0; ma < limit_a; ++ma) {
    int k = std::popcount(ma);
    pick_a.clear();
    for (int i = 0; i < a.n; ++i)
      if (ma & (1u << i)) pick_a.push_back(i);
    for (uint32_t mb = 0; mb < limit_b; ++mb) {
      if (std::popcount(mb) != k) continue;
      pick_b.clear();
      for (int i = 0; i < b.n; ++i)
        if (mb & (1u << i)) pick_b.push_back(i);
      // aligned by postorder; check pairwise consistency
      bool ok = true;
      for (int i = 0; ok && i < k; ++i)
        for (int j = i + 1; ok && j < k; ++j)
          if (a.relation(pick_a[i], pick_a[j]) != b.relation(pick_b[i], pick_b[j])) ok = false;
      if (!ok) continue;
      double cost = cm.delete_cost * (a.n - k) + cm.insert_cost * (b.n - k);
      for (int i = 0; i < k; ++i)
        if (a.label[pick_a[i]] != b.label[pick_b[i]]) cost += cm.rename_cost;
      if (cost < best) best = cost;
    }
  }
  return best;
}

inline mathcvt::ExprNode random_tree(std::mt19937& rng, int max_nodes, int alphabet = 4) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::uniform_int_distribution<int> size_pick(1, max_nodes);
  std::uniform_int_distribution<int> label_pick(0, alphabet - 1);
  int nodes = size_pick(rng);
  mathcvt::ExprNode root(names[label_pick(rng)], mathcvt::NodeKind::Generic);
  for (int i = 1; i < nodes; ++i) {
    // attach to a uniformly random existing node
    std::vector<mathcvt::ExprNode*> pool;
    std::vector<mathcvt::ExprNode*> stack{&root};
    while (!stack.empty()) {
      mathcvt::ExprNode* n = stack.back();
      stack.pop_back();
      pool.push_back(n);
      for (auto& c : n->children) stack.push_back(&c);
    }
    std::uniform_int_distribution<size_t> parent_pick(0, pool.size() - 1);
    pool[parent_pick(rng)]->children.emplace_back(names[label_pick(rng)],
                                                  mathcvt::NodeKind::Generic);
  }
  return root;
}

}  // namespace oracle
