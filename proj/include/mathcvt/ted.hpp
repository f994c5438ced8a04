#pragma once

#include <string>
#include <vector>

#include "mathcvt/expr_tree.hpp"

namespace mathcvt {

/// Edit costs. When shortcut rules are in play the ordering e < r < i is
/// required; violating it raises InvalidCostModel.
struct CostModel {
  double insert_cost = 1.0;
  double delete_cost = 1.0;
  double rename_cost = 1.0;
  double shortcut_cost = 0.5;

  static CostModel unit() { return {1.0, 1.0, 1.0, 0.5}; }
  static CostModel structural() { return {1.0, 1.0, 0.0, 0.5}; }
  /// i=d=1, r=0.75, e=0.5 — the defaults used with shortcuts enabled.
  static CostModel with_shortcuts() { return {1.0, 1.0, 0.75, 0.5}; }

  void validate(bool shortcuts_enabled) const;
};

/// A priced rewrite between two equivalent tree templates. Variables (`?x`)
/// must bind to identical subtrees on both sides; matching is bidirectional.
struct ShortcutRule {
  ExprNode lhs;
  ExprNode rhs;
  double cost = -1.0;  // negative: use the cost model's shortcut cost

  static ShortcutRule parse(const std::string& lhs_term, const std::string& rhs_term,
                            double cost = -1.0);
};

/// Rule file: one `lhs <-> rhs [@ cost]` per line, '#' comments.
std::vector<ShortcutRule> load_rules(const std::string& path);
std::vector<ShortcutRule> parse_rules(const std::string& text,
                                      const std::string& origin = "<string>");

/// Minimal edit cost transforming `a` into `b` under insert/delete/rename
/// plus one-step shortcut rewrites: when a rule matches a pair of subtrees
/// (with consistent variable bindings) that pair may be rewritten at the
/// rule's cost instead of being edited node by node.
double ted(const ExprNode& a, const ExprNode& b, const CostModel& cm,
           const std::vector<ShortcutRule>& rules = {});

/// ted with i=d=1, r=0, no shortcuts: label-blind structural distance.
double structural_ted(const ExprNode& a, const ExprNode& b);

/// True when the two content trees are identical up to the given equivalence
/// rules (distance 0 within 1e-9, rules priced at zero).
bool equivalence_zero_check(const ExprNode& a, const ExprNode& b,
                            const std::vector<ShortcutRule>& rules);

/// Distances for many pairs. threads > 1 uses OpenMP when available; the
/// serial path (threads <= 1) is the reference the parallel path must match.
std::vector<double> ted_batch(const std::vector<std::pair<const ExprNode*, const ExprNode*>>& pairs,
                              const CostModel& cm, const std::vector<ShortcutRule>& rules,
                              int threads = 1);

}  // namespace mathcvt
