#include "mathcvt/contentizer.hpp"

#include <algorithm>
#include <functional>

#include "mathcvt/error.hpp"
#include "mathcvt/mathml.hpp"
#include "mathcvt/term.hpp"

namespace mathcvt {

namespace {

// ---------------------------------------------------------------------------
// operator tables

// precedence classes, loosest first
enum OpLevel { NotOp = 0, Implication = 1, Junction = 2, RelationOp = 3, Additive = 4, MultOp = 5 };

struct OpInfo {
  OpLevel level;
  const char* content;  // canonical content label
};

const OpInfo* op_info(const std::string& label) {
  static const std::map<std::string, OpInfo> table = {
      {"\\Rightarrow", {Implication, "implies"}},
      {"\\implies", {Implication, "implies"}},
      {"\\Leftarrow", {Implication, "implied-by"}},
      {"\\Leftrightarrow", {Implication, "iff"}},
      {"\\iff", {Implication, "iff"}},
      {"\\lor", {Junction, "or"}},
      {"\\vee", {Junction, "or"}},
      {"\\land", {Junction, "and"}},
      {"\\wedge", {Junction, "and"}},
      {"=", {RelationOp, "eq"}},
      {"\\neq", {RelationOp, "neq"}},
      {"<", {RelationOp, "lt"}},
      {">", {RelationOp, "gt"}},
      {"\\leq", {RelationOp, "leq"}},
      {"\\geq", {RelationOp, "geq"}},
      {"\\approx", {RelationOp, "approx"}},
      {"\\equiv", {RelationOp, "equivalent"}},
      {"\\sim", {RelationOp, "sim"}},
      {"\\simeq", {RelationOp, "simeq"}},
      {"\\cong", {RelationOp, "cong"}},
      {"\\propto", {RelationOp, "propto"}},
      {"\\in", {RelationOp, "in"}},
      {"\\notin", {RelationOp, "notin"}},
      {"\\subset", {RelationOp, "prsubset"}},
      {"\\subseteq", {RelationOp, "subset"}},
      {"\\to", {RelationOp, "tendsto"}},
      {"\\rightarrow", {RelationOp, "tendsto"}},
      {"\\mapsto", {RelationOp, "maps-to"}},
      {"+", {Additive, "plus"}},
      {"-", {Additive, "minus"}},
      {"\\pm", {Additive, "plusminus"}},
      {"\\mp", {Additive, "minusplus"}},
      {"\\cdot", {MultOp, "times"}},
      {"\\times", {MultOp, "times"}},
      {"/", {MultOp, "divide"}},
      {"\\div", {MultOp, "divide"}},
  };
  auto it = table.find(label);
  return it == table.end() ? nullptr : &it->second;
}

bool is_mult_times(const std::string& label) { return label == "\\cdot" || label == "\\times"; }
bool is_mult_divide(const std::string& label) { return label == "/" || label == "\\div"; }

// ---------------------------------------------------------------------------
// reading resolution

struct Resolved {
  SymbolRole role = SymbolRole::Identifier;
  std::optional<SemanticAnnotation> annotation;
  bool conflict = false;
};

Resolved resolve(const ExprNode& node, const ReadingMap& readings) {
  Resolved r;
  if (const std::string* role = node.attr("m_role")) {
    if (auto parsed = role_from_string(*role)) r.role = *parsed;
    if (const std::string* cd = node.attr("m_cd")) {
      SemanticAnnotation ann;
      ann.cd = *cd;
      if (const std::string* s = node.attr("m_symbol")) ann.symbol_id = *s;
      if (const std::string* l = node.attr("m_label")) ann.label = *l;
      r.annotation = ann;
    }
    return r;
  }
  auto it = readings.find(node.id);
  if (it == readings.end() || it->second.empty()) return r;
  const auto& set = it->second;
  if (set.size() == 1) {
    r.role = set[0].role;
    r.annotation = set[0].annotation;
    return r;
  }
  bool same_role = std::all_of(set.begin(), set.end(),
                               [&](const Reading& x) { return x.role == set[0].role; });
  if (same_role) {
    r.role = set[0].role;  // annotation stays open
    return r;
  }
  r.conflict = true;  // roles disagree: default reading, refinements may override
  return r;
}

// ---------------------------------------------------------------------------
// fence pairing

struct PItem {
  const ExprNode* node = nullptr;
  bool group = false;
  std::string open;
  std::vector<std::vector<PItem>> args;  // comma-split group body
  int open_id = -1;
};

bool is_open_fence(const ExprNode& n) {
  if (n.kind != NodeKind::Fence) return false;
  const std::string* form = n.attr("form");
  return form && *form == "open";
}
bool is_close_fence(const ExprNode& n) {
  if (n.kind != NodeKind::Fence) return false;
  const std::string* form = n.attr("form");
  return form && *form == "close";
}

std::string matching_close(const std::string& open) {
  if (open == "(") return ")";
  if (open == "[") return "]";
  if (open == "\\{") return "\\}";
  if (open == "|" || open == "\\|") return open;
  return "";
}

std::vector<std::vector<PItem>> comma_split(std::vector<PItem> items) {
  std::vector<std::vector<PItem>> parts(1);
  for (auto& it : items) {
    if (!it.group && it.node->kind == NodeKind::Operator && it.node->label == ",") {
      parts.emplace_back();
      continue;
    }
    parts.back().push_back(std::move(it));
  }
  if (parts.size() > 1 && parts.back().empty()) parts.pop_back();
  return parts;
}

std::vector<PItem> pair_fences(const std::vector<const ExprNode*>& nodes) {
  std::vector<PItem> out;
  struct Open {
    std::string lexeme;
    int id;
    size_t out_index;  // items after this index belong to the group
    std::vector<PItem> saved;
  };
  std::vector<Open> stack;
  for (const ExprNode* n : nodes) {
    bool opens = is_open_fence(*n);
    bool closes = is_close_fence(*n);
    if (n->label == "|" || n->label == "\\|") {
      // pipes toggle: close if one is open, otherwise open
      if (!stack.empty() && stack.back().lexeme == n->label) {
        opens = false;
        closes = true;
      } else {
        opens = true;
        closes = false;
      }
    }
    if (opens) {
      stack.push_back({n->label, n->id, out.size(), std::move(out)});
      out.clear();
      continue;
    }
    if (closes) {
      if (!stack.empty() && matching_close(stack.back().lexeme) == n->label) {
        PItem g;
        g.group = true;
        g.open = stack.back().lexeme;
        g.open_id = stack.back().id;
        g.args = comma_split(std::move(out));
        out = std::move(stack.back().saved);
        stack.pop_back();
        out.push_back(std::move(g));
        continue;
      }
      // unmatched closer: keep as a plain token
    }
    PItem it;
    it.node = n;
    out.push_back(std::move(it));
  }
  // unmatched openers degrade to plain tokens at their original position
  while (!stack.empty()) {
    Open& o = stack.back();
    std::vector<PItem> merged = std::move(o.saved);
    PItem fence_item;
    for (const ExprNode* n : nodes)
      if (n->id == o.id) fence_item.node = n;
    if (fence_item.node) merged.push_back(std::move(fence_item));
    for (auto& rest : out) merged.push_back(std::move(rest));
    out = std::move(merged);
    stack.pop_back();
  }
  return out;
}

// ---------------------------------------------------------------------------
// core conversion

struct Ctx {
  const ReadingMap& readings;
  RefinementConfig cfg;
  std::set<int> einstein;
};

ExprNode parse_items(std::vector<PItem>& items, Ctx& ctx);
ExprNode content_atom(PItem& item, Ctx& ctx);

std::vector<const ExprNode*> item_nodes(const ExprNode& n) {
  if (n.is_row() && !n.has_attr("macro")) {
    std::vector<const ExprNode*> out;
    out.reserve(n.children.size());
    for (const auto& c : n.children) out.push_back(&c);
    return out;
  }
  return {&n};
}

ExprNode content_of_subtree(const ExprNode& n, Ctx& ctx) {
  auto nodes = item_nodes(n);
  auto items = pair_fences(nodes);
  return parse_items(items, ctx);
}

void set_srcid(ExprNode& c, const ExprNode& pres) {
  if (pres.id >= 0) c.attrs["srcid"] = std::to_string(pres.id);
}

void apply_annotation(ExprNode& c, const Resolved& r) {
  if (!r.annotation) return;
  c.label = r.annotation->symbol_id;
  c.kind = NodeKind::Command;
  c.attrs["cd"] = r.annotation->cd;
  if (!r.annotation->label.empty()) c.attrs["name"] = r.annotation->label;
}

ExprNode leaf_content(const ExprNode& n, Ctx& ctx) {
  ExprNode c(n.label, n.kind);
  if (n.kind == NodeKind::Operator || n.kind == NodeKind::Relation ||
      n.kind == NodeKind::Fence) {
    if (const OpInfo* op = op_info(n.label)) {
      c.label = op->content;
      c.kind = NodeKind::Operator;
    } else {
      c.kind = NodeKind::Command;
    }
  }
  Resolved r = resolve(n, ctx.readings);
  apply_annotation(c, r);
  set_srcid(c, n);
  return c;
}

const ExprNode* find_slot(const ExprNode& n, const std::string& slot, bool root) {
  if (!root) {
    if (const std::string* m = n.attr("marg"); m && *m == slot) return &n;
    if (n.has_attr("macro")) return nullptr;  // nested macro owns its own slots
  }
  for (const auto& c : n.children)
    if (const ExprNode* hit = find_slot(c, slot, false)) return hit;
  return nullptr;
}

const ExprNode* first_token(const ExprNode& n) {
  if (!n.is_row()) return &n;
  for (const auto& c : n.children)
    if (const ExprNode* t = first_token(c)) return t;
  return nullptr;
}

ExprNode instantiate_rewrite(const ExprNode& tpl,
                             const std::map<int, ExprNode>& slot_content) {
  if (tpl.has_attr("var")) {
    int idx = std::stoi(tpl.label.substr(1));
    auto it = slot_content.find(idx);
    if (it != slot_content.end()) return it->second;
    return ExprNode("", NodeKind::Command);
  }
  ExprNode out(tpl.label, tpl.kind);
  if (out.kind != NodeKind::Number)
    out.kind = content_element_label(out.label) ? NodeKind::Operator : NodeKind::Command;
  for (const auto& c : tpl.children) out.children.push_back(instantiate_rewrite(c, slot_content));
  return out;
}

ExprNode macro_head(const ExprNode& shape, Ctx& ctx) {
  const std::string macro_name = *shape.attr("macro");
  std::map<int, ExprNode> slot_content;
  std::vector<ExprNode> ordered;
  for (int slot = 1; slot <= 16; ++slot) {
    const ExprNode* arg = find_slot(shape, std::to_string(slot), true);
    if (!arg) continue;
    ExprNode c = content_of_subtree(*arg, ctx);
    slot_content[slot] = c;
    ordered.push_back(std::move(c));
  }

  ExprNode head;
  if (const std::string* rewrite = shape.attr("m_rewrite")) {
    head = instantiate_rewrite(parse_term(*rewrite, true), slot_content);
  } else {
    head.label = macro_name.substr(1);
    head.kind = NodeKind::Command;
    head.children = std::move(ordered);
  }
  if (const std::string* cd = shape.attr("m_cd")) {
    head.attrs["cd"] = *cd;
    if (const std::string* sym = shape.attr("m_symbol")) head.label = *sym;
    if (const std::string* lbl = shape.attr("m_label")) head.attrs["name"] = *lbl;
  }
  const ExprNode* anchor = shape.is_row() ? first_token(shape) : &shape;
  if (anchor) set_srcid(head, *anchor);
  return head;
}

ExprNode script_content(const ExprNode& n, Ctx& ctx) {
  ExprNode c("script", NodeKind::Command);
  const std::string* which = n.attr("script");
  c.attrs["script"] = which ? *which : "sup";
  for (const auto& child : n.children) {
    ExprNode cc = content_of_subtree(child, ctx);
    if (ctx.einstein.count(child.id)) cc.attrs["einstein"] = "1";
    c.children.push_back(std::move(cc));
  }
  Resolved r = resolve(n, ctx.readings);
  if (r.annotation) {
    c.attrs["cd"] = r.annotation->cd;
    c.attrs["symbol"] = r.annotation->symbol_id;
    c.attrs["name"] = r.annotation->label;
  }
  set_srcid(c, n);
  return c;
}

ExprNode group_content(PItem& item, Ctx& ctx) {
  auto parse_arg = [&](std::vector<PItem>& part) { return parse_items(part, ctx); };
  auto& args = item.args;
  if (item.open == "(") {
    if (args.size() == 1) return parse_arg(args[0]);  // grouping: dissolve
    ExprNode list("list", NodeKind::Operator);
    for (auto& a : args) list.children.push_back(parse_arg(a));
    return list;
  }
  if (item.open == "[") {
    ExprNode node("interval", NodeKind::Operator);
    for (auto& a : args) node.children.push_back(parse_arg(a));
    return node;
  }
  if (item.open == "\\{") {
    ExprNode node("set", NodeKind::Operator);
    for (auto& a : args) node.children.push_back(parse_arg(a));
    return node;
  }
  if (item.open == "|" || item.open == "\\|") {
    ExprNode node("abs", NodeKind::Operator);
    for (auto& a : args) node.children.push_back(parse_arg(a));
    return node;
  }
  ExprNode node("list", NodeKind::Operator);
  for (auto& a : args) node.children.push_back(parse_arg(a));
  return node;
}

ExprNode content_atom(PItem& item, Ctx& ctx) {
  if (item.group) return group_content(item, ctx);
  const ExprNode& n = *item.node;
  if (n.has_attr("macro")) return macro_head(n, ctx);
  switch (n.kind) {
    case NodeKind::Script:
      return script_content(n, ctx);
    case NodeKind::Fraction: {
      ExprNode c("divide", NodeKind::Operator);
      c.children.push_back(content_of_subtree(n.children.at(0), ctx));
      c.children.push_back(content_of_subtree(n.children.at(1), ctx));
      set_srcid(c, n);
      return c;
    }
    case NodeKind::Radical: {
      ExprNode c("root", NodeKind::Operator);
      c.children.push_back(content_of_subtree(n.children.at(0), ctx));
      if (n.children.size() > 1) c.children.push_back(content_of_subtree(n.children[1], ctx));
      set_srcid(c, n);
      return c;
    }
    case NodeKind::Table: {
      ExprNode c("cases", NodeKind::Command);
      for (const auto& row : n.children) {
        ExprNode branch("case", NodeKind::Command);
        for (const auto& cell : row.children)
          branch.children.push_back(content_of_subtree(cell, ctx));
        c.children.push_back(std::move(branch));
      }
      set_srcid(c, n);
      return c;
    }
    case NodeKind::Row:
      return content_of_subtree(n, ctx);
    case NodeKind::Command:
      if (n.label == "\\pmod" && !n.children.empty()) {
        ExprNode c("pmod", NodeKind::Operator);
        c.children.push_back(content_of_subtree(n.children[0], ctx));
        set_srcid(c, n);
        return c;
      }
      return leaf_content(n, ctx);
    default:
      return leaf_content(n, ctx);
  }
}

bool operand_item(const PItem& item) {
  if (item.group) return true;
  const ExprNode& n = *item.node;
  if (n.kind == NodeKind::Operator || n.kind == NodeKind::Relation ||
      n.kind == NodeKind::Fence)
    return n.has_attr("macro");
  return true;
}

ExprNode make_apply(ExprNode head, std::vector<ExprNode> args) {
  if (head.is_leaf()) {
    head.children = std::move(args);
    return head;
  }
  ExprNode app("apply", NodeKind::Apply);
  app.children.push_back(std::move(head));
  for (auto& a : args) app.children.push_back(std::move(a));
  return app;
}

SymbolRole role_of_item(const PItem& item, Ctx& ctx) {
  if (item.group || !item.node) return SymbolRole::Identifier;
  return resolve(*item.node, ctx.readings).role;
}

ExprNode parse_product(std::vector<PItem>& items, Ctx& ctx) {
  std::vector<ExprNode> factors;
  int times_srcid = -1;
  size_t i = 0;
  while (i < items.size()) {
    PItem& it = items[i];
    if (!it.group && it.node->kind == NodeKind::Operator && is_mult_times(it.node->label)) {
      if (times_srcid < 0) times_srcid = it.node->id;
      ++i;
      continue;
    }
    if (!it.group && it.node->label == "\\neg") {
      std::vector<PItem> rest(items.begin() + static_cast<long>(i) + 1, items.end());
      ExprNode no("not", NodeKind::Operator);
      set_srcid(no, *it.node);
      no.children.push_back(parse_product(rest, ctx));
      factors.push_back(std::move(no));
      break;
    }
    if (!it.group && it.node->label == "!" && !factors.empty()) {
      ExprNode fact("factorial", NodeKind::Operator);
      set_srcid(fact, *it.node);
      fact.children.push_back(std::move(factors.back()));
      factors.back() = std::move(fact);
      ++i;
      continue;
    }
    ExprNode f = content_atom(it, ctx);
    // function application: f(args) or f <operand>
    if (ctx.cfg.function_apply_rule && role_of_item(it, ctx) == SymbolRole::Function &&
        i + 1 < items.size()) {
      PItem& next = items[i + 1];
      if (next.group && next.open == "(") {
        std::vector<ExprNode> args;
        for (auto& a : next.args) args.push_back(parse_items(a, ctx));
        f = make_apply(std::move(f), std::move(args));
        ++i;
      } else if (operand_item(next)) {
        std::vector<ExprNode> args;
        args.push_back(content_atom(next, ctx));
        f = make_apply(std::move(f), std::move(args));
        ++i;
      }
    }
    factors.push_back(std::move(f));
    ++i;
  }
  if (factors.empty()) return ExprNode("", NodeKind::Command);
  if (factors.size() == 1) return std::move(factors.front());
  ExprNode times("times", NodeKind::Operator);
  if (times_srcid >= 0) times.attrs["srcid"] = std::to_string(times_srcid);
  times.children = std::move(factors);
  return times;
}

ExprNode parse_mult(std::vector<PItem>& items, Ctx& ctx) {
  // split at explicit division, fold left
  std::vector<std::vector<PItem>> chunks(1);
  std::vector<int> div_ids;
  for (auto& it : items) {
    if (!it.group && it.node->kind == NodeKind::Operator && is_mult_divide(it.node->label)) {
      div_ids.push_back(it.node->id);
      chunks.emplace_back();
      continue;
    }
    chunks.back().push_back(std::move(it));
  }
  ExprNode acc = parse_product(chunks[0], ctx);
  for (size_t k = 1; k < chunks.size(); ++k) {
    ExprNode rhs = parse_product(chunks[k], ctx);
    ExprNode div("divide", NodeKind::Operator);
    div.attrs["srcid"] = std::to_string(div_ids[k - 1]);
    div.children.push_back(std::move(acc));
    div.children.push_back(std::move(rhs));
    acc = std::move(div);
  }
  return acc;
}

struct Split {
  std::vector<std::vector<PItem>> segments;
  std::vector<const ExprNode*> ops;
};

Split split_level(std::vector<PItem>& items, OpLevel level) {
  Split s;
  s.segments.emplace_back();
  for (auto& it : items) {
    if (!it.group && (it.node->kind == NodeKind::Operator || it.node->kind == NodeKind::Relation)) {
      const OpInfo* op = op_info(it.node->label);
      if (op && op->level == level) {
        s.ops.push_back(it.node);
        s.segments.emplace_back();
        continue;
      }
    }
    s.segments.back().push_back(std::move(it));
  }
  return s;
}

ExprNode parse_level(std::vector<PItem>& items, Ctx& ctx, OpLevel level);

ExprNode fold_split(Split& s, Ctx& ctx, OpLevel next) {
  bool uniform = true;
  for (const ExprNode* op : s.ops)
    if (op_info(op->label)->content != std::string(op_info(s.ops[0]->label)->content))
      uniform = false;

  // leading unary sign
  bool leading_unary = s.segments[0].empty() && !s.ops.empty() &&
                       (op_info(s.ops[0]->label)->level == Additive);
  size_t first = 0;
  ExprNode acc;
  if (leading_unary) {
    ExprNode operand = parse_level(s.segments[1], ctx, next);
    const OpInfo* op = op_info(s.ops[0]->label);
    if (std::string(op->content) == "plus") {
      acc = std::move(operand);
    } else {
      acc = ExprNode(op->content, NodeKind::Operator);
      set_srcid(acc, *s.ops[0]);
      acc.children.push_back(std::move(operand));
    }
    first = 1;
    uniform = false;  // unary head breaks the flat chain
  } else {
    acc = parse_level(s.segments[0], ctx, next);
  }

  if (uniform && s.ops.size() >= 1 && first == 0) {
    ExprNode node(op_info(s.ops[0]->label)->content, NodeKind::Operator);
    set_srcid(node, *s.ops[0]);
    node.children.push_back(std::move(acc));
    for (size_t k = 1; k < s.segments.size(); ++k)
      node.children.push_back(parse_level(s.segments[k], ctx, next));
    return node;
  }
  for (size_t k = first + 1; k < s.segments.size(); ++k) {
    ExprNode node(op_info(s.ops[k - 1]->label)->content, NodeKind::Operator);
    set_srcid(node, *s.ops[k - 1]);
    node.children.push_back(std::move(acc));
    node.children.push_back(parse_level(s.segments[k], ctx, next));
    acc = std::move(node);
  }
  return acc;
}

ExprNode parse_level(std::vector<PItem>& items, Ctx& ctx, OpLevel level) {
  if (level == MultOp) return parse_mult(items, ctx);
  Split s = split_level(items, level);
  OpLevel next = static_cast<OpLevel>(level + 1);
  if (s.ops.empty()) {
    items = std::move(s.segments[0]);
    return parse_level(items, ctx, next);
  }
  return fold_split(s, ctx, next);
}

ExprNode parse_items(std::vector<PItem>& items, Ctx& ctx) {
  if (items.empty()) return ExprNode("", NodeKind::Command);
  return parse_level(items, ctx, Implication);
}

// ---------------------------------------------------------------------------
// refinement passes

bool is_postfix_glyph(const ExprNode& n, std::string& name) {
  if (!n.is_leaf()) return false;
  if (n.label == "\\dagger") name = "adjoint";
  else if (n.label == "\\prime") name = "transformation";
  else if (n.label == "\\circ") name = "degree";
  else return false;
  return true;
}

struct ScriptParts {
  ExprNode* base = nullptr;
  ExprNode* sub = nullptr;
  ExprNode* sup = nullptr;
};

ScriptParts script_parts(ExprNode& n) {
  ScriptParts p;
  const std::string* which = n.attr("script");
  if (!which || n.children.empty()) return p;
  p.base = &n.children[0];
  if (*which == "sub" && n.children.size() > 1) p.sub = &n.children[1];
  if (*which == "sup" && n.children.size() > 1) p.sup = &n.children[1];
  if (*which == "subsup" && n.children.size() > 2) {
    p.sub = &n.children[1];
    p.sup = &n.children[2];
  }
  return p;
}

bool is_script_node(const ExprNode& n) { return n.label == "script" && n.has_attr("script"); }

ExprNode transform_rec(const ExprNode& t, const std::function<ExprNode(ExprNode)>& fn) {
  ExprNode copy(t.label, t.kind);
  copy.attrs = t.attrs;
  copy.id = t.id;
  for (const auto& c : t.children) copy.children.push_back(transform_rec(c, fn));
  return fn(std::move(copy));
}

}  // namespace

ExprNode apply_special_heads(const ExprNode& content) {
  return transform_rec(content, [](ExprNode n) -> ExprNode {
    if (!is_script_node(n)) return n;
    ScriptParts p = script_parts(n);
    if (!p.sup || p.sub) return n;
    std::string head_name;
    if (!is_postfix_glyph(*p.sup, head_name)) return n;
    ExprNode head(head_name, NodeKind::Command);
    if (const std::string* sym = n.attr("symbol")) head.label = *sym;
    if (const std::string* cd = n.attr("cd")) head.attrs["cd"] = *cd;
    if (const std::string* nm = n.attr("name")) head.attrs["name"] = *nm;
    if (const std::string* src = n.attr("srcid")) head.attrs["srcid"] = *src;
    head.children.push_back(std::move(n.children[0]));
    return head;
  });
}

ExprNode apply_subscript_rule(const ExprNode& content) {
  return transform_rec(content, [](ExprNode n) -> ExprNode {
    if (!is_script_node(n)) return n;
    ScriptParts p = script_parts(n);
    if (!p.sub) return n;
    ExprNode base = std::move(*p.base);
    ExprNode sub = std::move(*p.sub);
    ExprNode new_base;
    if (sub.kind == NodeKind::Text) {
      // text-mode subscript fuses into a compound identifier
      new_base = ExprNode(base.label + "_" + sub.label, NodeKind::Identifier);
      new_base.attrs = base.attrs;
    } else {
      new_base = std::move(base);
      new_base.children.push_back(std::move(sub));
    }
    if (!p.sup) return new_base;
    ExprNode script("script", NodeKind::Generic);
    script.attrs = n.attrs;
    script.attrs["script"] = "sup";
    script.children.push_back(std::move(new_base));
    script.children.push_back(std::move(n.children.back()));
    return script;
  });
}

ExprNode apply_power_rule(const ExprNode& content) {
  return transform_rec(content, [](ExprNode n) -> ExprNode {
    if (!is_script_node(n)) return n;
    ScriptParts p = script_parts(n);
    if (!p.sup || p.sub) return n;  // subscripts are a different rule's business
    if (p.sup->has_attr("einstein")) {
      ExprNode base = std::move(*p.base);
      base.children.push_back(std::move(*p.sup));
      return base;
    }
    ExprNode power("power", NodeKind::Operator);
    if (const std::string* src = n.attr("srcid")) power.attrs["srcid"] = *src;
    power.children.push_back(std::move(n.children[0]));
    power.children.push_back(std::move(n.children.back()));
    return power;
  });
}

std::set<int> detect_einstein(const ExprNode& presentation) {
  std::set<int> marks;
  std::function<void(const ExprNode&)> scan = [&](const ExprNode& node) {
    for (const auto& c : node.children) scan(c);
    if (!node.is_row()) return;
    // split the row into multiplicative terms and tally index letters per term
    struct Occurrence {
      int id;
      bool upper;
    };
    std::map<std::string, std::vector<Occurrence>> tally;
    auto flush = [&] {
      for (const auto& [letter, occ] : tally) {
        if (occ.size() != 2) continue;
        if (occ[0].upper == occ[1].upper) continue;
        marks.insert(occ[0].id);
        marks.insert(occ[1].id);
      }
      tally.clear();
    };
    for (const auto& c : node.children) {
      const OpInfo* op = (c.kind == NodeKind::Operator || c.kind == NodeKind::Relation)
                             ? op_info(c.label)
                             : nullptr;
      bool comma = c.kind == NodeKind::Operator && c.label == ",";
      if (comma || (op && op->level != MultOp)) {
        flush();
        continue;
      }
      if (c.kind != NodeKind::Script) continue;
      ExprNode copy = c;  // cheap: scripts are small
      ScriptParts p = script_parts(copy);
      auto record = [&](ExprNode* idx, bool upper) {
        if (idx && idx->kind == NodeKind::Identifier && idx->is_leaf())
          tally[idx->label].push_back({idx->id, upper});
      };
      record(p.sub, false);
      record(p.sup, true);
    }
    flush();
  };
  scan(presentation);
  return marks;
}

ExprNode disambiguate_invisible(const ExprNode& presentation, const ReadingMap& readings) {
  ExprNode copy = presentation;
  std::function<void(ExprNode&)> walk = [&](ExprNode& node) {
    for (auto& c : node.children) walk(c);
    if (!node.is_row()) return;
    for (size_t i = 0; i + 1 < node.children.size(); ++i) {
      ExprNode& left = node.children[i];
      const ExprNode& right = node.children[i + 1];
      auto is_operand = [](const ExprNode& n) {
        if (n.kind == NodeKind::Operator || n.kind == NodeKind::Relation) return false;
        if (n.kind == NodeKind::Fence) {
          const std::string* form = n.attr("form");
          return form && *form == "open";
        }
        return true;
      };
      if (!is_operand(left) || left.kind == NodeKind::Fence) continue;
      if (!is_operand(right)) continue;
      Resolved r = resolve(left, readings);
      node.children[i].attrs["invisible"] =
          r.role == SymbolRole::Function ? "apply" : "times";
    }
  };
  walk(copy);
  return copy;
}

ExprNode contentize(const ExprNode& presentation, const ReadingMap& readings,
                    const RefinementConfig& cfg) {
  if (!cfg.any()) {
    for (const ExprNode* n : preorder(presentation)) {
      Resolved r = resolve(*n, readings);
      if (r.conflict)
        raise(ErrorKind::AmbiguityUnresolved,
              "token '" + n->label + "' has conflicting roles and all refinements are disabled");
    }
  }

  Ctx ctx{readings, cfg, cfg.einstein_detection ? detect_einstein(presentation) : std::set<int>{}};

  std::vector<const ExprNode*> nodes = item_nodes(presentation);
  // equation labels are dropped; trailing modulus becomes a constraint
  std::vector<const ExprNode*> kept;
  std::string constraint;
  for (const ExprNode* n : nodes) {
    if (n->has_attr("eqlabel")) continue;
    if (n->kind == NodeKind::Command && n->label == "\\pmod" && !n->children.empty()) {
      ExprNode mod = content_of_subtree(n->children[0], ctx);
      constraint = "mod(" + print_term(mod) + ")";
      continue;
    }
    kept.push_back(n);
  }

  auto items = pair_fences(kept);
  auto parts = comma_split(std::move(items));
  // expression lists: convert the first sub-expression
  ExprNode result = parse_items(parts[0], ctx);

  result = apply_special_heads(result);
  if (cfg.subscript_rule) result = apply_subscript_rule(result);
  if (cfg.power_rule) result = apply_power_rule(result);
  if (!constraint.empty()) result.attrs["constraint"] = constraint;
  return result;
}

}  // namespace mathcvt
