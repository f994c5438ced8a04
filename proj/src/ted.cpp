#include "mathcvt/ted.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mathcvt/error.hpp"
#include "mathcvt/term.hpp"

namespace mathcvt {

void CostModel::validate(bool shortcuts_enabled) const {
  if (insert_cost < 0 || delete_cost < 0 || rename_cost < 0 || shortcut_cost < 0)
    raise(ErrorKind::InvalidCostModel, "costs must be non-negative");
  if (shortcuts_enabled) {
    if (!(shortcut_cost < rename_cost && rename_cost < insert_cost))
      raise(ErrorKind::InvalidCostModel, "shortcuts require e < r < i");
  }
}

ShortcutRule ShortcutRule::parse(const std::string& lhs_term, const std::string& rhs_term,
                                 double cost) {
  ShortcutRule rule;
  rule.lhs = parse_term(lhs_term, /*allow_vars=*/true);
  rule.rhs = parse_term(rhs_term, /*allow_vars=*/true);
  rule.cost = cost;
  // both sides must bind the same variable set
  auto vars_of = [](const ExprNode& t) {
    std::vector<std::string> vars;
    for (const ExprNode* n : preorder(t))
      if (n->has_attr("var")) vars.push_back(n->label);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  };
  if (vars_of(rule.lhs) != vars_of(rule.rhs))
    raise(ErrorKind::FormatError, "rule sides bind different variables: " + lhs_term);
  return rule;
}

std::vector<ShortcutRule> parse_rules(const std::string& text, const std::string& origin) {
  std::vector<ShortcutRule> rules;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    size_t sep = line.find("<->");
    if (sep == std::string::npos)
      raise(ErrorKind::FormatError, origin + ":" + std::to_string(lineno) + ": missing '<->'");
    std::string lhs = line.substr(0, sep);
    std::string rhs = line.substr(sep + 3);
    double cost = -1.0;
    size_t at = rhs.find('@');
    if (at != std::string::npos) {
      cost = std::stod(rhs.substr(at + 1));
      rhs.erase(at);
    }
    try {
      rules.push_back(ShortcutRule::parse(lhs, rhs, cost));
    } catch (const Error& e) {
      raise(ErrorKind::FormatError, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rules;
}

std::vector<ShortcutRule> load_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoError, "cannot open rule file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str(), path);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Flat {
  std::vector<const ExprNode*> post;  // postorder
  std::vector<int> lmd;               // leftmost leaf descendant (postorder index)
  std::vector<int> keyroots;

  explicit Flat(const ExprNode& root) {
    build(root);
    std::map<int, int> last_with_lmd;
    for (int i = 0; i < static_cast<int>(post.size()); ++i) last_with_lmd[lmd[i]] = i;
    for (const auto& [_, idx] : last_with_lmd) keyroots.push_back(idx);
    std::sort(keyroots.begin(), keyroots.end());
  }

  int build(const ExprNode& n) {
    int first_leaf = -1;
    for (const auto& c : n.children) {
      int child_lmd = build(c);
      if (first_leaf < 0) first_leaf = child_lmd;
    }
    if (first_leaf < 0) first_leaf = static_cast<int>(post.size());
    post.push_back(&n);
    lmd.push_back(first_leaf);
    return first_leaf;
  }

  int size() const { return static_cast<int>(post.size()); }
};

bool match_pattern(const ExprNode& pattern, const ExprNode& tree,
                   std::map<std::string, const ExprNode*>& bindings) {
  if (pattern.has_attr("var")) {
    auto it = bindings.find(pattern.label);
    if (it != bindings.end()) return same_shape(*it->second, tree);
    bindings.emplace(pattern.label, &tree);
    return true;
  }
  if (pattern.label != tree.label || pattern.children.size() != tree.children.size())
    return false;
  for (size_t i = 0; i < pattern.children.size(); ++i)
    if (!match_pattern(pattern.children[i], tree.children[i], bindings)) return false;
  return true;
}

bool rule_matches(const ShortcutRule& rule, const ExprNode& a, const ExprNode& b) {
  {
    std::map<std::string, const ExprNode*> bind;
    if (match_pattern(rule.lhs, a, bind) && match_pattern(rule.rhs, b, bind)) return true;
  }
  {
    std::map<std::string, const ExprNode*> bind;
    if (match_pattern(rule.rhs, a, bind) && match_pattern(rule.lhs, b, bind)) return true;
  }
  return false;
}

struct TedRun {
  const Flat& A;
  const Flat& B;
  const CostModel& cm;
  std::vector<double> td;        // treedist, nA x nB
  std::vector<double> shortcut;  // min rule price per subtree pair, inf if none

  double& tdist(int x, int y) { return td[static_cast<size_t>(x) * B.size() + y]; }
  double sc(int x, int y) const { return shortcut[static_cast<size_t>(x) * B.size() + y]; }

  TedRun(const Flat& a, const Flat& b, const CostModel& m, const std::vector<ShortcutRule>& rules)
      : A(a), B(b), cm(m) {
    td.assign(static_cast<size_t>(A.size()) * B.size(), 0.0);
    shortcut.assign(static_cast<size_t>(A.size()) * B.size(), kInf);
    for (const ShortcutRule& rule : rules) {
      double price = rule.cost < 0 ? cm.shortcut_cost : rule.cost;
      for (int x = 0; x < A.size(); ++x)
        for (int y = 0; y < B.size(); ++y)
          if (price < sc(x, y) && rule_matches(rule, *A.post[x], *B.post[y]))
            shortcut[static_cast<size_t>(x) * B.size() + y] = price;
    }
  }

  double rename(int x, int y) const {
    return A.post[x]->label == B.post[y]->label ? 0.0 : cm.rename_cost;
  }

  void forest_dist(int i, int j) {
    const int ioff = A.lmd[i] - 1;
    const int joff = B.lmd[j] - 1;
    const int m = i - A.lmd[i] + 2;
    const int n = j - B.lmd[j] + 2;
    std::vector<double> fd(static_cast<size_t>(m) * n, 0.0);
    auto f = [&](int x, int y) -> double& { return fd[static_cast<size_t>(x) * n + y]; };
    for (int x = 1; x < m; ++x) f(x, 0) = f(x - 1, 0) + cm.delete_cost;
    for (int y = 1; y < n; ++y) f(0, y) = f(0, y - 1) + cm.insert_cost;
    for (int x = 1; x < m; ++x) {
      for (int y = 1; y < n; ++y) {
        const int ax = x + ioff;
        const int by = y + joff;
        if (A.lmd[ax] == A.lmd[i] && B.lmd[by] == B.lmd[j]) {
          double best = std::min({f(x - 1, y) + cm.delete_cost, f(x, y - 1) + cm.insert_cost,
                                  f(x - 1, y - 1) + rename(ax, by)});
          best = std::min(best, sc(ax, by));  // priced equivalence rewrite
          tdist(ax, by) = best;
          f(x, y) = best;
        } else {
          const int p = A.lmd[ax] - 1 - ioff;
          const int q = B.lmd[by] - 1 - joff;
          f(x, y) = std::min({f(x - 1, y) + cm.delete_cost, f(x, y - 1) + cm.insert_cost,
                              f(p, q) + tdist(ax, by)});
        }
      }
    }
  }

  double run() {
    for (int i : A.keyroots)
      for (int j : B.keyroots) forest_dist(i, j);
    return tdist(A.size() - 1, B.size() - 1);
  }
};

}  // namespace

double ted(const ExprNode& a, const ExprNode& b, const CostModel& cm,
           const std::vector<ShortcutRule>& rules) {
  cm.validate(!rules.empty());
  Flat fa(a), fb(b);
  TedRun run(fa, fb, cm, rules);
  return run.run();
}

double structural_ted(const ExprNode& a, const ExprNode& b) {
  return ted(a, b, CostModel::structural(), {});
}

bool equivalence_zero_check(const ExprNode& a, const ExprNode& b,
                            const std::vector<ShortcutRule>& rules) {
  CostModel cm = CostModel::with_shortcuts();
  cm.shortcut_cost = 0.0;  // equivalences are free for the zero check
  std::vector<ShortcutRule> free_rules = rules;
  for (auto& r : free_rules) r.cost = 0.0;
  Flat fa(a), fb(b);
  TedRun run(fa, fb, cm, free_rules);
  return run.run() <= 1e-9;
}

std::vector<double> ted_batch(
    const std::vector<std::pair<const ExprNode*, const ExprNode*>>& pairs, const CostModel& cm,
    const std::vector<ShortcutRule>& rules, int threads) {
  cm.validate(!rules.empty());
  std::vector<double> out(pairs.size(), 0.0);
  if (threads <= 1) {
    for (size_t k = 0; k < pairs.size(); ++k)
      out[k] = ted(*pairs[k].first, *pairs[k].second, cm, rules);
    return out;
  }
#ifdef _OPENMP
  omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < static_cast<long>(pairs.size()); ++k)
    out[static_cast<size_t>(k)] =
        ted(*pairs[static_cast<size_t>(k)].first, *pairs[static_cast<size_t>(k)].second, cm, rules);
#else
  for (size_t k = 0; k < pairs.size(); ++k)
    out[k] = ted(*pairs[k].first, *pairs[k].second, cm, rules);
#endif
  return out;
}

}  // namespace mathcvt
