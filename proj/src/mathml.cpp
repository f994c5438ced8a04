#include "mathcvt/mathml.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "mathcvt/error.hpp"
#include "mathcvt/xml.hpp"

namespace mathcvt {

namespace {

// command <-> display glyph (inverse of the tokenizer's normalization)
const std::map<std::string, std::string>& command_glyphs() {
  static const std::map<std::string, std::string> table = {
      {"\\alpha", "α"},   {"\\beta", "β"},    {"\\gamma", "γ"},
      {"\\delta", "δ"},   {"\\epsilon", "ε"}, {"\\zeta", "ζ"},
      {"\\eta", "η"},     {"\\theta", "θ"},   {"\\lambda", "λ"},
      {"\\mu", "μ"},      {"\\nu", "ν"},      {"\\xi", "ξ"},
      {"\\pi", "π"},      {"\\rho", "ρ"},     {"\\sigma", "σ"},
      {"\\tau", "τ"},     {"\\phi", "φ"},     {"\\chi", "χ"},
      {"\\psi", "ψ"},     {"\\omega", "ω"},   {"\\Gamma", "Γ"},
      {"\\Delta", "Δ"},   {"\\Sigma", "Σ"},   {"\\Omega", "Ω"},
      {"\\Phi", "Φ"},     {"\\Psi", "Ψ"},     {"\\Re", "ℜ"},
      {"\\Im", "ℑ"},      {"\\Rightarrow", "⇒"}, {"\\Leftarrow", "⇐"},
      {"\\Leftrightarrow", "⇔"}, {"\\to", "→"}, {"\\lor", "∨"},
      {"\\land", "∧"},    {"\\neg", "¬"},     {"\\leq", "≤"},
      {"\\geq", "≥"},     {"\\neq", "≠"},     {"\\approx", "≈"},
      {"\\equiv", "≡"},   {"\\in", "∈"},      {"\\infty", "∞"},
      {"\\pm", "±"},      {"\\cdot", "⋅"},    {"\\times", "×"},
      {"\\div", "÷"},     {"\\dagger", "†"},  {"\\prime", "′"},
      {"\\circ", "∘"},    {"\\partial", "∂"}, {"\\nabla", "∇"},
  };
  return table;
}

const std::map<std::string, std::string>& glyph_to_command() {
  static const std::map<std::string, std::string> inv = [] {
    std::map<std::string, std::string> m;
    for (const auto& [cmd, glyph] : command_glyphs()) m[glyph] = cmd;
    return m;
  }();
  return inv;
}

// content elements that are heads or atoms in MathML content markup
const std::set<std::string>& content_elements() {
  static const std::set<std::string> elems = {
      "eq",     "neq",     "lt",      "gt",       "leq",      "geq",     "approx",
      "in",     "notin",   "sim",     "simeq",    "cong",     "propto",  "tendsto",
      "implies", "implied-by", "iff", "equivalent", "or",     "and",     "not",
      "xor",    "plus",    "minus",   "plusminus", "minusplus", "times", "divide",
      "power",  "root",    "abs",     "factorial", "interval", "set",    "list",
      "union",  "intersect", "subset", "prsubset", "maps-to", "sum",     "int",
      "exp",    "ln",      "log",     "sin",      "cos",      "tan",     "gcd",
      "min",    "max",     "pmod"};
  return elems;
}

// attributes with structural meaning, handled separately from passthrough
bool reserved_attr(const std::string& key) {
  return key == "id" || key == "xref" || key == "cd" || key == "tex";
}

void put_common_attrs(XmlNode& el, const ExprNode& n) {
  if (n.id > 0) el.set_attr("id", std::to_string(n.id));
}

void put_xref(XmlNode& el, const ExprNode& n, const std::map<int, int>& xref_of) {
  auto it = xref_of.find(n.id);
  if (it != xref_of.end()) el.set_attr("xref", std::to_string(it->second));
}

void put_passthrough(XmlNode& el, const ExprNode& n) {
  for (const auto& [k, v] : n.attrs) {
    if (reserved_attr(k)) continue;
    el.set_attr(k, v);
  }
}

// ---------------------------------------------------------------------------
// presentation -> XML

XmlNode pres_to_xml(const ExprNode& n, const std::map<int, int>& xref_of);

XmlNode token_element(const char* name, const ExprNode& n, const std::map<int, int>& xref_of) {
  XmlNode el = XmlNode::element(name);
  put_common_attrs(el, n);
  put_xref(el, n, xref_of);
  std::string display = n.label;
  if (n.kind == NodeKind::Command || n.kind == NodeKind::Operator ||
      n.kind == NodeKind::Relation) {
    auto it = command_glyphs().find(n.label);
    if (it != command_glyphs().end()) {
      display = it->second;
    } else if (!n.label.empty() && n.label[0] == '\\') {
      display = n.label.substr(1);
      el.set_attr("tex", n.label);
    }
  }
  put_passthrough(el, n);
  el.children.push_back(XmlNode::text_node(display));
  return el;
}

XmlNode pres_to_xml(const ExprNode& n, const std::map<int, int>& xref_of) {
  switch (n.kind) {
    case NodeKind::Row: {
      XmlNode el = XmlNode::element("mrow");
      put_common_attrs(el, n);
      put_passthrough(el, n);
      for (const auto& c : n.children) el.children.push_back(pres_to_xml(c, xref_of));
      return el;
    }
    case NodeKind::Script: {
      const std::string* which = n.attr("script");
      std::string w = which ? *which : "sup";
      XmlNode el = XmlNode::element(w == "sub" ? "msub" : (w == "sup" ? "msup" : "msubsup"));
      put_common_attrs(el, n);
      put_xref(el, n, xref_of);
      put_passthrough(el, n);
      for (const auto& c : n.children) el.children.push_back(pres_to_xml(c, xref_of));
      return el;
    }
    case NodeKind::Fraction: {
      XmlNode el = XmlNode::element("mfrac");
      put_common_attrs(el, n);
      put_xref(el, n, xref_of);
      if (n.label == "\\sfrac") el.set_attr("bevelled", "true");
      if (n.label != "\\frac") el.set_attr("tex", n.label);
      put_passthrough(el, n);
      for (const auto& c : n.children) el.children.push_back(pres_to_xml(c, xref_of));
      return el;
    }
    case NodeKind::Radical: {
      XmlNode el = XmlNode::element(n.children.size() > 1 ? "mroot" : "msqrt");
      put_common_attrs(el, n);
      put_xref(el, n, xref_of);
      put_passthrough(el, n);
      for (const auto& c : n.children) el.children.push_back(pres_to_xml(c, xref_of));
      return el;
    }
    case NodeKind::Table: {
      XmlNode el = XmlNode::element("mtable");
      el.set_attr("class", n.label);
      put_common_attrs(el, n);
      put_xref(el, n, xref_of);
      put_passthrough(el, n);
      for (const auto& row : n.children) {
        XmlNode tr = XmlNode::element("mtr");
        for (const auto& cell : row.children) {
          XmlNode td = XmlNode::element("mtd");
          td.children.push_back(pres_to_xml(cell, xref_of));
          tr.children.push_back(std::move(td));
        }
        el.children.push_back(std::move(tr));
      }
      return el;
    }
    case NodeKind::Identifier:
      return token_element("mi", n, xref_of);
    case NodeKind::Number:
      return token_element("mn", n, xref_of);
    case NodeKind::Operator:
    case NodeKind::Relation:
    case NodeKind::Fence:
      return token_element("mo", n, xref_of);
    case NodeKind::Text:
      return token_element("mtext", n, xref_of);
    case NodeKind::Command: {
      if (!n.children.empty()) {  // \pmod{n}, \tag{..}
        XmlNode el = XmlNode::element("mrow");
        el.set_attr("texname", n.label);
        put_common_attrs(el, n);
        put_xref(el, n, xref_of);
        put_passthrough(el, n);
        for (const auto& c : n.children) el.children.push_back(pres_to_xml(c, xref_of));
        return el;
      }
      return token_element("mi", n, xref_of);
    }
    default: {  // Generic / foreign
      XmlNode el = XmlNode::element(n.label.empty() ? "mrow" : n.label);
      put_common_attrs(el, n);
      put_xref(el, n, xref_of);
      put_passthrough(el, n);
      for (const auto& c : n.children) el.children.push_back(pres_to_xml(c, xref_of));
      return el;
    }
  }
}

// ---------------------------------------------------------------------------
// content -> XML

XmlNode content_to_xml(const ExprNode& n, const std::map<int, int>& xref_of);

XmlNode content_head(const ExprNode& n, const std::map<int, int>& xref_of, bool is_head) {
  if (n.has_attr("cd")) {
    XmlNode el = XmlNode::element("csymbol");
    put_common_attrs(el, n);
    put_xref(el, n, xref_of);
    el.set_attr("cd", *n.attr("cd"));
    put_passthrough(el, n);
    el.children.push_back(XmlNode::text_node(n.label));
    return el;
  }
  if (content_elements().count(n.label)) {
    XmlNode el = XmlNode::element(n.label);
    put_common_attrs(el, n);
    put_xref(el, n, xref_of);
    put_passthrough(el, n);
    return el;
  }
  if (n.kind == NodeKind::Identifier || (!is_head && (n.kind == NodeKind::Command ||
                                                      n.kind == NodeKind::Text))) {
    XmlNode el = XmlNode::element("ci");
    put_common_attrs(el, n);
    put_xref(el, n, xref_of);
    std::string display = n.label;
    if (n.kind == NodeKind::Command) {
      auto it = command_glyphs().find(n.label);
      if (it != command_glyphs().end()) {
        display = it->second;
      } else if (!n.label.empty() && n.label[0] == '\\') {
        display = n.label.substr(1);
        el.set_attr("tex", n.label);
      }
    }
    if (n.kind == NodeKind::Text) el.set_attr("type", "text");
    put_passthrough(el, n);
    el.children.push_back(XmlNode::text_node(display));
    return el;
  }
  if (n.kind == NodeKind::Number) {
    XmlNode el = XmlNode::element("cn");
    put_common_attrs(el, n);
    put_xref(el, n, xref_of);
    put_passthrough(el, n);
    el.children.push_back(XmlNode::text_node(n.label));
    return el;
  }
  // symbol without a dictionary binding
  XmlNode el = XmlNode::element("csymbol");
  put_common_attrs(el, n);
  put_xref(el, n, xref_of);
  put_passthrough(el, n);
  std::string display = n.label;
  if (!n.label.empty() && n.label[0] == '\\') {
    auto it = command_glyphs().find(n.label);
    if (it != command_glyphs().end()) {
      display = it->second;
    } else {
      display = n.label.substr(1);
      el.set_attr("tex", n.label);
    }
  }
  el.children.push_back(XmlNode::text_node(display));
  return el;
}

XmlNode content_to_xml(const ExprNode& n, const std::map<int, int>& xref_of) {
  if (n.kind == NodeKind::Apply) {  // compound head: children[0] applied to the rest
    XmlNode el = XmlNode::element("apply");
    put_common_attrs(el, n);
    put_xref(el, n, xref_of);
    put_passthrough(el, n);
    for (const auto& c : n.children) el.children.push_back(content_to_xml(c, xref_of));
    return el;
  }
  if (n.label == "cases") {
    XmlNode el = XmlNode::element("piecewise");
    put_common_attrs(el, n);
    put_xref(el, n, xref_of);
    put_passthrough(el, n);
    for (const auto& c : n.children) el.children.push_back(content_to_xml(c, xref_of));
    return el;
  }
  if (n.label == "case") {
    XmlNode el = XmlNode::element("piece");
    put_common_attrs(el, n);
    put_xref(el, n, xref_of);
    put_passthrough(el, n);
    for (const auto& c : n.children) el.children.push_back(content_to_xml(c, xref_of));
    return el;
  }
  if (n.is_leaf()) return content_head(n, xref_of, false);
  XmlNode apply = XmlNode::element("apply");
  apply.children.push_back(content_head(n, xref_of, true));
  for (const auto& c : n.children) apply.children.push_back(content_to_xml(c, xref_of));
  return apply;
}

// ---------------------------------------------------------------------------
// XML -> trees

int parse_id(const XmlNode& el) {
  const std::string* id = el.attr("id");
  if (!id) return -1;
  try {
    return std::stoi(*id);
  } catch (...) {
    return -1;
  }
}

void take_passthrough(ExprNode& n, const XmlNode& el) {
  for (const auto& [k, v] : el.attrs) {
    if (reserved_attr(k) || k == "texname") continue;
    n.attrs[k] = v;
  }
}

void collect_xref(const XmlNode& el, std::vector<std::pair<int, int>>& xrefs, bool pres_side) {
  const std::string* xref = el.attr("xref");
  int id = parse_id(el);
  if (!xref || id < 0) return;
  try {
    int other = std::stoi(*xref);
    if (pres_side)
      xrefs.emplace_back(id, other);
    else
      xrefs.emplace_back(other, id);
  } catch (...) {
  }
}

NodeKind classify_mo(const std::string& text, const XmlNode& el, std::string& form_out) {
  static const std::set<std::string> opens = {"(", "[", "\\{", "{", "|", "⟨"};
  static const std::set<std::string> closes = {")", "]", "\\}", "}", "⟩"};
  if (const std::string* form = el.attr("form"); form && (*form == "open" || *form == "close")) {
    form_out = *form;
    return NodeKind::Fence;
  }
  if (opens.count(text)) {
    form_out = "open";
    return NodeKind::Fence;
  }
  if (closes.count(text)) {
    form_out = "close";
    return NodeKind::Fence;
  }
  static const std::set<std::string> rels = {"=", "<", ">", "\\leq", "\\geq", "\\neq",
                                             "\\approx", "\\equiv", "\\in", "\\Rightarrow",
                                             "\\Leftrightarrow", "\\to", "\\sim", "\\propto"};
  if (rels.count(text)) return NodeKind::Relation;
  return NodeKind::Operator;
}

std::string recover_command(const std::string& text, const XmlNode& el) {
  if (const std::string* tex = el.attr("tex")) return *tex;
  auto it = glyph_to_command().find(text);
  if (it != glyph_to_command().end()) return it->second;
  // foreign spellings of plain ascii operators
  static const std::map<std::string, std::string> ascii = {
      {"\u2212", "-"}, {"\u2215", "/"}, {"\u2217", "*"}, {"\u2236", ":"}};
  auto ai = ascii.find(text);
  if (ai != ascii.end()) return ai->second;
  return text;
}

bool invisible_operator(const std::string& text) {
  // function application, invisible times, separator, invisible plus
  return text == "\u2061" || text == "\u2062" || text == "\u2063" || text == "\u2064";
}

std::string local_name(const std::string& qualified) {
  size_t colon = qualified.rfind(':');
  return colon == std::string::npos ? qualified : qualified.substr(colon + 1);
}

ExprNode pres_from_xml(const XmlNode& el, std::vector<std::pair<int, int>>& xrefs) {
  const std::string name = local_name(el.name);
  auto recurse_children = [&](ExprNode& n) {
    for (const auto& c : el.children)
      if (c.type == XmlNode::Type::Element) n.children.push_back(pres_from_xml(c, xrefs));
  };
  collect_xref(el, xrefs, true);

  ExprNode n;
  n.id = parse_id(el);
  if (name == "mrow") {
    if (const std::string* texname = el.attr("texname")) {
      n.label = *texname;
      n.kind = NodeKind::Command;
    } else {
      n.kind = NodeKind::Row;
    }
    take_passthrough(n, el);
    recurse_children(n);
    return n;
  }
  if (name == "mi") {
    std::string text = el.inner_text();
    std::string cmd = recover_command(text, el);
    n.label = cmd;
    n.kind = cmd != text || (el.attr("tex") != nullptr) ? NodeKind::Command : NodeKind::Identifier;
    take_passthrough(n, el);
    return n;
  }
  if (name == "mn") {
    n.label = el.inner_text();
    n.kind = NodeKind::Number;
    take_passthrough(n, el);
    return n;
  }
  if (name == "mo") {
    std::string text = el.inner_text();
    if (invisible_operator(text)) {
      n.kind = NodeKind::Row;  // dissolves during normalization
      return n;
    }
    n.label = recover_command(text, el);
    std::string form;
    n.kind = classify_mo(n.label, el, form);
    take_passthrough(n, el);
    if (!form.empty()) n.attrs["form"] = form;
    return n;
  }
  if (name == "mtext") {
    n.label = el.inner_text();
    n.kind = NodeKind::Text;
    take_passthrough(n, el);
    return n;
  }
  if (name == "msub" || name == "msup" || name == "msubsup") {
    n.label = "Script";
    n.kind = NodeKind::Script;
    take_passthrough(n, el);
    n.attrs["script"] = name == "msub" ? "sub" : (name == "msup" ? "sup" : "subsup");
    recurse_children(n);
    return n;
  }
  if (name == "mfrac") {
    const std::string* tex = el.attr("tex");
    const std::string* bev = el.attr("bevelled");
    n.label = tex ? *tex : (bev && *bev == "true" ? "\\sfrac" : "\\frac");
    n.kind = NodeKind::Fraction;
    take_passthrough(n, el);
    n.attrs.erase("bevelled");
    recurse_children(n);
    return n;
  }
  if (name == "msqrt" || name == "mroot") {
    n.label = "\\sqrt";
    n.kind = NodeKind::Radical;
    take_passthrough(n, el);
    recurse_children(n);
    if (name == "msqrt" && n.children.size() > 1) {  // implied mrow
      ExprNode wrap("", NodeKind::Row);
      wrap.children = std::move(n.children);
      n.children.clear();
      n.children.push_back(std::move(wrap));
    }
    return n;
  }
  if (name == "mstyle" || name == "mpadded") {  // transparent layout wrappers
    n.kind = NodeKind::Row;
    recurse_children(n);
    return n;
  }
  if (name == "mtable") {
    const std::string* cls = el.attr("class");
    n.label = cls ? *cls : "mtable";
    n.kind = NodeKind::Table;
    take_passthrough(n, el);
    n.attrs.erase("class");
    for (const auto& tr : el.children) {
      if (tr.type != XmlNode::Type::Element) continue;
      ExprNode row("row", NodeKind::Row);
      for (const auto& td : tr.children) {
        if (td.type != XmlNode::Type::Element) continue;
        std::vector<ExprNode> cell;
        for (const auto& c : td.children)
          if (c.type == XmlNode::Type::Element) cell.push_back(pres_from_xml(c, xrefs));
        if (cell.size() == 1)
          row.children.push_back(std::move(cell[0]));
        else {
          ExprNode wrap("", NodeKind::Row);
          wrap.children = std::move(cell);
          row.children.push_back(std::move(wrap));
        }
      }
      n.children.push_back(std::move(row));
    }
    return n;
  }
  // foreign element: preserved verbatim
  n.label = name;
  n.kind = NodeKind::Generic;
  take_passthrough(n, el);
  std::string text;
  for (const auto& c : el.children) {
    if (c.type == XmlNode::Type::Element)
      n.children.push_back(pres_from_xml(c, xrefs));
    else
      text += c.text;
  }
  if (n.children.empty() && text.find_first_not_of(" \t\r\n") != std::string::npos)
    n.attrs["text"] = text;
  return n;
}

ExprNode content_from_xml(const XmlNode& el, std::vector<std::pair<int, int>>& xrefs);

ExprNode content_leaf_from_xml(const XmlNode& el, std::vector<std::pair<int, int>>& xrefs) {
  collect_xref(el, xrefs, false);
  ExprNode n;
  n.id = parse_id(el);
  const std::string name = local_name(el.name);
  if (name == "csymbol") {
    n.label = recover_command(el.inner_text(), el);
    n.kind = NodeKind::Command;
    if (const std::string* cd = el.attr("cd")) n.attrs["cd"] = *cd;
    take_passthrough(n, el);
    return n;
  }
  if (name == "ci") {
    std::string text = el.inner_text();
    std::string cmd = recover_command(text, el);
    n.label = cmd;
    const std::string* type = el.attr("type");
    if (type && *type == "text") {
      n.kind = NodeKind::Text;
      n.attrs["type"] = *type;
    } else {
      n.kind = cmd != text || el.attr("tex") ? NodeKind::Command : NodeKind::Identifier;
    }
    take_passthrough(n, el);
    n.attrs.erase("type");
    return n;
  }
  if (name == "cn") {
    bool has_sep = false;
    for (const auto& c : el.children)
      if (c.type == XmlNode::Type::Element && local_name(c.name) == "sep") has_sep = true;
    if (has_sep) {  // part-wise literal, e.g. type="rational"
      n.label = "divide";
      n.kind = NodeKind::Operator;
      std::string part;
      auto flush = [&] {
        size_t b = part.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return;
        size_t e = part.find_last_not_of(" \t\r\n");
        n.children.emplace_back(part.substr(b, e - b + 1), NodeKind::Number);
        part.clear();
      };
      for (const auto& c : el.children) {
        if (c.type == XmlNode::Type::Text)
          part += c.text;
        else
          flush();
      }
      flush();
      take_passthrough(n, el);
      n.attrs.erase("type");
      return n;
    }
    n.label = el.inner_text();
    n.kind = NodeKind::Number;
    take_passthrough(n, el);
    return n;
  }
  // eq, plus, ...: empty head elements
  n.label = name;
  n.kind = NodeKind::Operator;
  take_passthrough(n, el);
  return n;
}

ExprNode content_from_xml(const XmlNode& el, std::vector<std::pair<int, int>>& xrefs) {
  const std::string name = local_name(el.name);
  if (name == "apply") {
    std::vector<const XmlNode*> kids;
    for (const auto& c : el.children)
      if (c.type == XmlNode::Type::Element) kids.push_back(&c);
    if (kids.empty()) {
      ExprNode n("apply", NodeKind::Apply);
      n.id = parse_id(el);
      return n;
    }
    const XmlNode& head = *kids[0];
    bool compound_head = head.name == "apply";
    for (const auto& c : head.children)
      if (c.type == XmlNode::Type::Element) compound_head = true;
    if (compound_head) {
      ExprNode n("apply", NodeKind::Apply);
      n.id = parse_id(el);
      collect_xref(el, xrefs, false);
      take_passthrough(n, el);
      for (const XmlNode* k : kids) n.children.push_back(content_from_xml(*k, xrefs));
      return n;
    }
    ExprNode n = content_leaf_from_xml(head, xrefs);
    for (size_t i = 1; i < kids.size(); ++i)
      n.children.push_back(content_from_xml(*kids[i], xrefs));
    return n;
  }
  if (name == "piecewise" || name == "piece" || name == "otherwise") {
    ExprNode n(name == "piecewise" ? "cases" : "case", NodeKind::Command);
    n.id = parse_id(el);
    collect_xref(el, xrefs, false);
    take_passthrough(n, el);
    for (const auto& c : el.children)
      if (c.type == XmlNode::Type::Element) n.children.push_back(content_from_xml(c, xrefs));
    return n;
  }
  if (name == "interval" || name == "set" || name == "list" || name == "vector") {
    ExprNode n(name, NodeKind::Command);
    n.id = parse_id(el);
    collect_xref(el, xrefs, false);
    take_passthrough(n, el);
    for (const auto& c : el.children)
      if (c.type == XmlNode::Type::Element) n.children.push_back(content_from_xml(c, xrefs));
    return n;
  }
  return content_leaf_from_xml(el, xrefs);
}

// ---------------------------------------------------------------------------
// id numbering

void number_presentation(ExprNode& n, int& next) {
  n.id = n.is_row() ? -1 : next++;
  for (auto& c : n.children) number_presentation(c, next);
}

void number_content(ExprNode& n, int& next) {
  n.id = next++;
  for (auto& c : n.children) number_content(c, next);
}

void collect_srcid_pairs(const ExprNode& n, const std::map<int, int>& old_to_new,
                         std::vector<std::pair<int, int>>& out) {
  if (const std::string* src = n.attr("srcid")) {
    try {
      auto it = old_to_new.find(std::stoi(*src));
      if (it != old_to_new.end()) out.emplace_back(it->second, n.id);
    } catch (...) {
    }
  }
  for (const auto& c : n.children) collect_srcid_pairs(c, old_to_new, out);
}

void build_old_to_new(const ExprNode& n, int& next, std::map<int, int>& table) {
  if (!n.is_row()) {
    if (n.id >= 0) table[n.id] = next;
    ++next;
  }
  for (const auto& c : n.children) build_old_to_new(c, next, table);
}

}  // namespace

void ParallelMarkup::validate() const {
  auto check_unique = [](const ExprNode& t, const char* side) {
    std::set<int> seen;
    for (const ExprNode* n : preorder(t)) {
      if (n->id < 0) continue;
      if (!seen.insert(n->id).second)
        raise(ErrorKind::ParseError, std::string("duplicate id in ") + side + " tree");
    }
    return seen;
  };
  std::set<int> pres_ids, content_ids;
  if (presentation) pres_ids = check_unique(*presentation, "presentation");
  if (content) content_ids = check_unique(*content, "content");
  std::set<int> seen_p, seen_c;
  for (const auto& [p, c] : xrefs) {
    if (!pres_ids.count(p) || !content_ids.count(c))
      raise(ErrorKind::ParseError, "xref endpoint does not exist");
    if (!seen_p.insert(p).second || !seen_c.insert(c).second)
      raise(ErrorKind::ParseError, "xref map is not injective");
  }
}

ParallelMarkup build_parallel(ExprNode presentation, std::optional<ExprNode> content) {
  ParallelMarkup pm;
  // old ids (from parsing) -> new reading-order ids
  std::map<int, int> old_to_new;
  int probe = 1;
  build_old_to_new(presentation, probe, old_to_new);
  int next = 1;
  number_presentation(presentation, next);

  if (content) {
    int cnext = next;
    number_content(*content, cnext);
    collect_srcid_pairs(*content, old_to_new, pm.xrefs);
    clear_attr(*content, "srcid");
    // injectivity: first pair per endpoint wins
    std::sort(pm.xrefs.begin(), pm.xrefs.end());
    std::set<int> used_p, used_c;
    std::vector<std::pair<int, int>> kept;
    for (const auto& [p, c] : pm.xrefs)
      if (used_p.insert(p).second && used_c.insert(c).second) kept.emplace_back(p, c);
    pm.xrefs = std::move(kept);
    pm.content = std::move(*content);
  }
  pm.presentation = std::move(presentation);
  pm.validate();
  return pm;
}

std::string emit(const ParallelMarkup& pm) {
  pm.validate();
  std::map<int, int> pres_xref, content_xref;
  for (const auto& [p, c] : pm.xrefs) {
    pres_xref[p] = c;
    content_xref[c] = p;
  }
  XmlNode math = XmlNode::element("math");
  if (!pm.presentation && !pm.content) return xml_write(math);
  if (pm.content) {
    XmlNode semantics = XmlNode::element("semantics");
    if (pm.presentation)
      semantics.children.push_back(pres_to_xml(*pm.presentation, pres_xref));
    XmlNode ann = XmlNode::element("annotation-xml");
    ann.set_attr("encoding", "MathML-Content");
    ann.children.push_back(content_to_xml(*pm.content, content_xref));
    semantics.children.push_back(std::move(ann));
    math.children.push_back(std::move(semantics));
  } else {
    math.children.push_back(pres_to_xml(*pm.presentation, pres_xref));
  }
  return xml_write(math);
}

ParallelMarkup parse_mathml(const std::string& xml) {
  XmlNode root = xml_parse(xml);
  if (root.name != "math" && !root.name.ends_with(":math"))
    raise(ErrorKind::NotMathML, "root element is " + root.name);
  ParallelMarkup pm;
  std::vector<std::pair<int, int>> pres_pairs, content_pairs;

  const XmlNode* pres_el = nullptr;
  const XmlNode* content_el = nullptr;
  std::vector<const XmlNode*> pres_multi;

  std::vector<const XmlNode*> scan;
  for (const auto& c : root.children)
    if (c.type == XmlNode::Type::Element) scan.push_back(&c);
  if (scan.size() == 1 && (scan[0]->name == "semantics" || scan[0]->name.ends_with(":semantics"))) {
    for (const auto& c : scan[0]->children) {
      if (c.type != XmlNode::Type::Element) continue;
      if (local_name(c.name) == "annotation-xml") {
        const std::string* enc = c.attr("encoding");
        if (enc && *enc == "MathML-Content") {
          for (const auto& inner : c.children)
            if (inner.type == XmlNode::Type::Element && !content_el) content_el = &inner;
        }
        continue;
      }
      if (local_name(c.name) == "annotation") continue;
      if (!pres_el) pres_el = &c;
    }
  } else {
    for (const XmlNode* el : scan) pres_multi.push_back(el);
  }

  if (pres_el) {
    pm.presentation = pres_from_xml(*pres_el, pres_pairs);
  } else if (pres_multi.size() == 1) {
    pm.presentation = pres_from_xml(*pres_multi[0], pres_pairs);
  } else if (pres_multi.size() > 1) {
    ExprNode row("", NodeKind::Row);
    for (const XmlNode* el : pres_multi) row.children.push_back(pres_from_xml(*el, pres_pairs));
    pm.presentation = std::move(row);
  }
  if (content_el) pm.content = content_from_xml(*content_el, content_pairs);

  // merge the two views of the cross references
  std::set<std::pair<int, int>> pairs(pres_pairs.begin(), pres_pairs.end());
  for (const auto& pc : content_pairs) pairs.insert(pc);
  std::set<int> pres_ids, content_ids;
  if (pm.presentation)
    for (const ExprNode* n : preorder(*pm.presentation))
      if (n->id >= 0) pres_ids.insert(n->id);
  if (pm.content)
    for (const ExprNode* n : preorder(*pm.content))
      if (n->id >= 0) content_ids.insert(n->id);
  std::set<int> used_p, used_c;
  for (const auto& [p, c] : pairs) {
    if (!pres_ids.count(p) || !content_ids.count(c)) continue;  // foreign junk
    if (!used_p.insert(p).second || !used_c.insert(c).second) continue;
    pm.xrefs.emplace_back(p, c);
  }
  std::sort(pm.xrefs.begin(), pm.xrefs.end());
  return pm;
}

ExprNode tree_from_xml(const std::string& xml) {
  XmlNode root = xml_parse(xml);
  std::vector<std::pair<int, int>> ignored;
  return pres_from_xml(root, ignored);
}

bool content_element_label(const std::string& label) { return content_elements().count(label) != 0; }

namespace {

ExprNode expand_mfenced(ExprNode nc) {
  std::string open = "(";
  std::string close = ")";
  std::string sep = ",";
  if (const std::string* o = nc.attr("open")) open = *o;
  if (const std::string* cl = nc.attr("close")) close = *cl;
  if (const std::string* s = nc.attr("separators")) sep = s->empty() ? "" : s->substr(0, 1);
  ExprNode row("", NodeKind::Row);
  ExprNode fo(open, NodeKind::Fence);
  fo.attrs["form"] = "open";
  row.children.push_back(std::move(fo));
  for (size_t i = 0; i < nc.children.size(); ++i) {
    if (i && !sep.empty()) row.children.emplace_back(sep, NodeKind::Operator);
    row.children.push_back(std::move(nc.children[i]));
  }
  ExprNode fc(close, NodeKind::Fence);
  fc.attrs["form"] = "close";
  row.children.push_back(std::move(fc));
  return row;
}

}  // namespace

ExprNode normalize_presentation(const ExprNode& tree) {
  // bottom-up
  ExprNode n(tree.label, tree.kind);
  n.attrs = tree.attrs;
  n.id = tree.id;
  for (const auto& c : tree.children) {
    ExprNode nc = normalize_presentation(c);
    // rows nested in rows are pure layout: splice their children
    if (n.is_row() && nc.is_row()) {
      for (auto& gc : nc.children) n.children.push_back(std::move(gc));
    } else {
      n.children.push_back(std::move(nc));
    }
  }
  if (n.label == "mfenced" && n.kind == NodeKind::Generic) return expand_mfenced(std::move(n));
  if (n.is_row() && n.children.size() == 1 && n.attrs.empty()) return std::move(n.children[0]);
  return n;
}

}  // namespace mathcvt
