#include "mathcvt/latex_parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "mathcvt/error.hpp"

namespace mathcvt {

namespace {

ExprNode wrap_row(std::vector<ExprNode> nodes) {
  if (nodes.size() == 1) return std::move(nodes.front());
  ExprNode row("", NodeKind::Row);
  row.children = std::move(nodes);
  return row;
}

void set_annotation_attrs(ExprNode& node, const MacroDef& def) {
  node.attrs["macro"] = def.name;
  if (def.annotation) {
    node.attrs["m_cd"] = def.annotation->cd;
    node.attrs["m_symbol"] = def.annotation->symbol_id;
    node.attrs["m_label"] = def.annotation->label;
  }
  if (def.role) node.attrs["m_role"] = to_string(*def.role);
  if (!def.rewrite.empty()) node.attrs["m_rewrite"] = def.rewrite;
}

struct Arg {
  ExprNode tree;
  int slot = 0;        // 1-based: mandatory, then optional, then @-args
  bool optional = false;
  bool at = false;
};

struct Parser {
  const std::vector<Token>& tokens;
  const MacroRegistry& registry;
  size_t pos = 0;
  int depth = 0;
  static constexpr int kMaxDepth = 400;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth > kMaxDepth) raise(ErrorKind::ParseError, "expression nesting too deep");
    }
    ~DepthGuard() { --p.depth; }
  };

  bool eof() const { return pos >= tokens.size(); }
  const Token& cur() const { return tokens[pos]; }

  void skip_ws() {
    while (!eof() && cur().kind == TokenKind::Whitespace) ++pos;
  }

  bool at_kind(TokenKind k) const { return !eof() && cur().kind == k; }

  ExprNode parse_all() {
    auto nodes = parse_sequence([](const Token&) { return false; });
    if (nodes.empty()) raise(ErrorKind::ParseError, "empty expression");
    return wrap_row(std::move(nodes));
  }

  std::vector<ExprNode> parse_sequence(const std::function<bool(const Token&)>& stop) {
    std::vector<ExprNode> out;
    for (;;) {
      skip_ws();
      if (eof() || stop(cur())) break;
      out.push_back(parse_scripted_atom());
    }
    return out;
  }

  ExprNode parse_scripted_atom() {
    ExprNode base = parse_atom();
    ExprNode sub, sup;
    bool has_sub = false, has_sup = false;
    for (;;) {
      skip_ws();
      if (at_kind(TokenKind::SubscriptMarker)) {
        if (has_sub) raise(ErrorKind::ParseError, "double subscript");
        ++pos;
        sub = read_arg("subscript");
        has_sub = true;
        continue;
      }
      if (at_kind(TokenKind::SuperscriptMarker)) {
        if (has_sup) raise(ErrorKind::ParseError, "double superscript");
        ++pos;
        sup = read_arg("superscript");
        has_sup = true;
        continue;
      }
      if (at_kind(TokenKind::Operator) && cur().lexeme == "'") {
        if (has_sup) raise(ErrorKind::ParseError, "double superscript");
        std::vector<ExprNode> primes;
        while (at_kind(TokenKind::Operator) && cur().lexeme == "'") {
          primes.emplace_back("\\prime", NodeKind::Operator);
          ++pos;
        }
        sup = wrap_row(std::move(primes));
        has_sup = true;
        continue;
      }
      break;
    }
    if (!has_sub && !has_sup) return base;
    ExprNode script("Script", NodeKind::Script);
    script.children.push_back(std::move(base));
    if (has_sub) script.children.push_back(std::move(sub));
    if (has_sup) script.children.push_back(std::move(sup));
    script.attrs["script"] = has_sub && has_sup ? "subsup" : (has_sub ? "sub" : "sup");
    return script;
  }

  ExprNode parse_atom() {
    DepthGuard guard(*this);
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::Number:
        return parse_number();
      case TokenKind::Identifier: {
        ++pos;
        return ExprNode(t.lexeme, NodeKind::Identifier);
      }
      case TokenKind::Relation: {
        ++pos;
        return ExprNode(t.lexeme, NodeKind::Relation);
      }
      case TokenKind::Operator: {
        ++pos;
        return ExprNode(t.lexeme == "'" ? "\\prime" : t.lexeme, NodeKind::Operator);
      }
      case TokenKind::OpenFence: {
        ++pos;
        ExprNode f(t.lexeme, NodeKind::Fence);
        f.attrs["form"] = "open";
        return f;
      }
      case TokenKind::CloseFence: {
        ++pos;
        ExprNode f(t.lexeme, NodeKind::Fence);
        f.attrs["form"] = "close";
        return f;
      }
      case TokenKind::GroupOpen: {
        ++pos;
        auto nodes = parse_sequence([](const Token& tk) { return tk.kind == TokenKind::GroupClose; });
        if (!at_kind(TokenKind::GroupClose))
          raise(ErrorKind::UnbalancedGroup, "missing '}'");
        ++pos;
        return wrap_row(std::move(nodes));
      }
      case TokenKind::GroupClose:
        raise(ErrorKind::UnbalancedGroup, "unexpected '}' at offset " + std::to_string(t.position));
      case TokenKind::SubscriptMarker:
      case TokenKind::SuperscriptMarker:
        raise(ErrorKind::ParseError, "script marker without base at offset " + std::to_string(t.position));
      case TokenKind::Command:
        return parse_command();
      case TokenKind::Text: {
        ++pos;
        return ExprNode(t.lexeme, NodeKind::Text);
      }
      case TokenKind::Whitespace:
        break;  // unreachable: callers skip whitespace
    }
    raise(ErrorKind::ParseError, "unexpected token at offset " + std::to_string(t.position));
  }

  ExprNode parse_number() {
    std::string digits;
    size_t expected = cur().position;
    bool seen_dot = false;
    while (!eof()) {
      const Token& t = cur();
      if (t.position != expected) break;  // whitespace separates tokens
      if (t.kind == TokenKind::Number) {
        digits += t.lexeme;
      } else if (t.kind == TokenKind::Operator && t.lexeme == "." && !seen_dot &&
                 pos + 1 < tokens.size() && tokens[pos + 1].kind == TokenKind::Number &&
                 tokens[pos + 1].position == expected + 1) {
        digits += '.';
        seen_dot = true;
      } else {
        break;
      }
      expected = t.position + t.lexeme.size();
      ++pos;
    }
    return ExprNode(digits, NodeKind::Number);
  }

  ExprNode parse_command() {
    const Token& t = cur();
    if (t.lexeme == "\\begin") return parse_environment();
    const MacroDef* def = registry.find(t.lexeme);
    if (!def)
      raise(ErrorKind::UnknownMacro, t.lexeme + " at offset " + std::to_string(t.position));
    ++pos;
    return build_macro(*def, t.position);
  }

  ExprNode read_arg(const char* what) {
    skip_ws();
    if (eof()) raise(ErrorKind::ArityError, std::string("missing ") + what);
    if (at_kind(TokenKind::GroupOpen)) {
      ++pos;
      auto nodes = parse_sequence([](const Token& tk) { return tk.kind == TokenKind::GroupClose; });
      if (!at_kind(TokenKind::GroupClose)) raise(ErrorKind::UnbalancedGroup, "missing '}'");
      ++pos;
      return wrap_row(std::move(nodes));
    }
    // undelimited argument: exactly one token
    switch (cur().kind) {
      case TokenKind::Number: {
        ExprNode n(cur().lexeme, NodeKind::Number);
        ++pos;
        return n;
      }
      case TokenKind::Identifier: {
        ExprNode n(cur().lexeme, NodeKind::Identifier);
        ++pos;
        return n;
      }
      case TokenKind::Command:
        return parse_command();
      case TokenKind::Operator: {
        ExprNode n(cur().lexeme, NodeKind::Operator);
        ++pos;
        return n;
      }
      default:
        raise(ErrorKind::ArityError,
              std::string("bad ") + what + " at offset " + std::to_string(cur().position));
    }
  }

  std::vector<Arg> read_macro_args(const MacroDef& def) {
    std::vector<Arg> args;
    // optional [..] arguments come first in source order
    for (int i = 0; i < def.optional_args; ++i) {
      skip_ws();
      if (at_kind(TokenKind::OpenFence) && cur().lexeme == "[") {
        ++pos;
        auto nodes = parse_sequence([](const Token& tk) {
          return tk.kind == TokenKind::CloseFence && tk.lexeme == "]";
        });
        if (!at_kind(TokenKind::CloseFence)) raise(ErrorKind::UnbalancedGroup, "missing ']'");
        ++pos;
        args.push_back({wrap_row(std::move(nodes)), def.arity + 1 + i, true, false});
      }
    }
    for (int i = 0; i < def.arity; ++i)
      args.push_back({read_arg((def.name + " argument").c_str()), i + 1, false, false});
    if (def.at_args > 0) {
      skip_ws();
      if (!(at_kind(TokenKind::Operator) && cur().lexeme == "@"))
        raise(ErrorKind::ArityError, def.name + " expects '@' before its argument list");
      ++pos;
      for (int i = 0; i < def.at_args; ++i)
        args.push_back({read_arg((def.name + " argument").c_str()),
                        def.arity + def.optional_args + 1 + i, false, true});
    }
    // sort by slot so shape builders can index directly
    std::sort(args.begin(), args.end(), [](const Arg& a, const Arg& b) { return a.slot < b.slot; });
    return args;
  }

  static ExprNode tag_arg(Arg& arg) {
    ExprNode node = std::move(arg.tree);
    node.attrs["marg"] = std::to_string(arg.slot);
    if (arg.optional) node.attrs["marg_opt"] = "1";
    if (arg.at) node.attrs["marg_at"] = "1";
    return node;
  }

  ExprNode build_macro(const MacroDef& def, size_t at_offset) {
    if (def.shape == MacroShape::Symbol) {
      ExprNode node(def.name, def.token_kind);
      if (def.role) node.attrs["m_role"] = to_string(*def.role);
      if (def.annotation) {
        node.attrs["m_cd"] = def.annotation->cd;
        node.attrs["m_symbol"] = def.annotation->symbol_id;
        node.attrs["m_label"] = def.annotation->label;
      }
      return node;
    }

    if (def.shape == MacroShape::OperatorName || def.shape == MacroShape::TextMode)
      return build_text_like(def);

    std::vector<Arg> args = read_macro_args(def);
    auto arg_by_slot = [&](int slot) -> Arg* {
      for (auto& a : args)
        if (a.slot == slot) return &a;
      return nullptr;
    };
    auto need = [&](int slot) -> Arg& {
      Arg* a = arg_by_slot(slot);
      if (!a)
        raise(ErrorKind::ArityError,
              def.name + " missing argument " + std::to_string(slot) + " at offset " +
                  std::to_string(at_offset));
      return *a;
    };

    auto fence = [](const std::string& lex, bool open) {
      ExprNode f(lex, NodeKind::Fence);
      f.attrs["form"] = open ? "open" : "close";
      return f;
    };
    auto op = [](const std::string& lex) { return ExprNode(lex, NodeKind::Operator); };

    switch (def.shape) {
      case MacroShape::Fraction: {
        ExprNode node(def.name, NodeKind::Fraction);
        node.children.push_back(std::move(need(1).tree));
        node.children.push_back(std::move(need(2).tree));
        return node;
      }
      case MacroShape::Radical: {
        ExprNode node(def.name, NodeKind::Radical);
        node.children.push_back(std::move(need(1).tree));
        if (Arg* index = arg_by_slot(2)) node.children.push_back(std::move(index->tree));
        return node;
      }
      case MacroShape::Pmod: {
        ExprNode node(def.name, NodeKind::Command);
        node.children.push_back(std::move(need(1).tree));
        return node;
      }
      case MacroShape::Tag: {
        ExprNode node(def.name, NodeKind::Command);
        node.attrs["eqlabel"] = "1";
        node.children.push_back(std::move(need(1).tree));
        return node;
      }
      case MacroShape::FencedPair: {
        bool curly = def.display == "\\{\\}";
        ExprNode row("", NodeKind::Row);
        row.children.push_back(fence(curly ? "\\{" : "[", true));
        row.children.push_back(tag_arg(need(1)));
        row.children.push_back(op(","));
        row.children.push_back(tag_arg(need(2)));
        row.children.push_back(fence(curly ? "\\}" : "]", false));
        set_annotation_attrs(row, def);
        return row;
      }
      case MacroShape::ScriptUpper: {
        ExprNode script("Script", NodeKind::Script);
        script.children.push_back(tag_arg(need(1)));
        script.children.push_back(op(def.display));
        script.attrs["script"] = "sup";
        set_annotation_attrs(script, def);
        return script;
      }
      case MacroShape::ScriptUpperLower: {
        ExprNode script("Script", NodeKind::Script);
        script.children.push_back(tag_arg(need(1)));
        script.children.push_back(tag_arg(need(3)));  // lower index
        script.children.push_back(tag_arg(need(2)));  // upper index
        script.attrs["script"] = "subsup";
        set_annotation_attrs(script, def);
        return script;
      }
      case MacroShape::ParenUpper: {
        ExprNode paren("", NodeKind::Row);
        paren.children.push_back(fence("(", true));
        paren.children.push_back(tag_arg(need(2)));
        paren.children.push_back(fence(")", false));
        ExprNode script("Script", NodeKind::Script);
        script.children.push_back(tag_arg(need(1)));
        script.children.push_back(std::move(paren));
        script.attrs["script"] = "sup";
        set_annotation_attrs(script, def);
        return script;
      }
      case MacroShape::Call:
      case MacroShape::SubCall:
      case MacroShape::SupSubCall:
      case MacroShape::PairSupSubCall: {
        ExprNode head = make_display_head(def);
        ExprNode head_part = std::move(head);
        if (def.shape == MacroShape::SubCall || def.shape == MacroShape::SupSubCall ||
            def.shape == MacroShape::PairSupSubCall) {
          ExprNode script("Script", NodeKind::Script);
          script.children.push_back(std::move(head_part));
          bool has_sup = false;
          ExprNode sup;
          if (def.shape == MacroShape::SupSubCall) {
            if (Arg* opt = arg_by_slot(2)) {
              sup = tag_arg(*opt);
              has_sup = true;
            }
            script.children.push_back(tag_arg(need(1)));
          } else if (def.shape == MacroShape::PairSupSubCall) {
            ExprNode pair("", NodeKind::Row);
            pair.children.push_back(fence("(", true));
            pair.children.push_back(tag_arg(need(1)));
            pair.children.push_back(op(","));
            pair.children.push_back(tag_arg(need(2)));
            pair.children.push_back(fence(")", false));
            sup = std::move(pair);
            has_sup = true;
            script.children.push_back(tag_arg(need(3)));
          } else {
            script.children.push_back(tag_arg(need(1)));
          }
          if (has_sup) {
            script.children.push_back(std::move(sup));
            script.attrs["script"] = "subsup";
          } else {
            script.attrs["script"] = "sub";
          }
          head_part = std::move(script);
        }
        ExprNode row("", NodeKind::Row);
        row.children.push_back(std::move(head_part));
        row.children.push_back(fence("(", true));
        int first_at = def.arity + def.optional_args + 1;
        for (int i = 0; i < def.at_args; ++i) {
          if (i) row.children.push_back(op(","));
          row.children.push_back(tag_arg(need(first_at + i)));
        }
        row.children.push_back(fence(")", false));
        set_annotation_attrs(row, def);
        return row;
      }
      default:
        raise(ErrorKind::ParseError, "unhandled macro shape for " + def.name);
    }
  }

  ExprNode make_display_head(const MacroDef& def) {
    std::string display = def.display.empty() ? def.name : def.display;
    NodeKind kind = display.size() == 1 && std::isalpha(static_cast<unsigned char>(display[0]))
                        ? NodeKind::Identifier
                        : NodeKind::Command;
    return ExprNode(display, kind);
  }

  ExprNode build_text_like(const MacroDef& def) {
    skip_ws();
    if (!at_kind(TokenKind::GroupOpen))
      raise(ErrorKind::ArityError, def.name + " expects a braced argument");
    ++pos;
    std::string content;
    int depth = 1;
    while (!eof()) {
      const Token& t = cur();
      if (t.kind == TokenKind::GroupOpen) ++depth;
      if (t.kind == TokenKind::GroupClose && --depth == 0) {
        ++pos;
        break;
      }
      content += t.kind == TokenKind::Whitespace ? " " : t.lexeme;
      ++pos;
    }
    if (depth != 0) raise(ErrorKind::UnbalancedGroup, "missing '}' in " + def.name);
    if (content.empty()) raise(ErrorKind::ArityError, def.name + " argument is empty");
    if (def.shape == MacroShape::OperatorName) {
      ExprNode node(content, NodeKind::Identifier);
      node.attrs["opname"] = "1";
      if (def.role) node.attrs["m_role"] = to_string(*def.role);
      return node;
    }
    ExprNode node(content, NodeKind::Text);
    node.attrs["textcmd"] = def.name;
    return node;
  }

  ExprNode parse_environment() {
    size_t at_offset = cur().position;
    ++pos;  // \begin
    std::string env = read_env_name();
    if (env != "cases")
      raise(ErrorKind::UnknownMacro, "\\begin{" + env + "} at offset " + std::to_string(at_offset));

    ExprNode table("cases", NodeKind::Table);
    ExprNode row("row", NodeKind::Row);
    std::vector<ExprNode> cell;
    bool done = false;
    auto flush_cell = [&] {
      if (!cell.empty()) row.children.push_back(wrap_row(std::move(cell)));
      cell.clear();
    };
    auto flush_row = [&] {
      flush_cell();
      if (!row.children.empty()) table.children.push_back(std::move(row));
      row = ExprNode("row", NodeKind::Row);
    };
    while (!done) {
      skip_ws();
      if (eof()) raise(ErrorKind::UnbalancedGroup, "missing \\end{cases}");
      const Token& t = cur();
      if (t.kind == TokenKind::Command && t.lexeme == "\\end") {
        ++pos;
        std::string closing = read_env_name();
        if (closing != env)
          raise(ErrorKind::ParseError, "\\end{" + closing + "} does not match \\begin{" + env + "}");
        flush_row();
        done = true;
        continue;
      }
      if (t.kind == TokenKind::Command && t.lexeme == "\\\\") {
        ++pos;
        flush_row();
        continue;
      }
      if (t.kind == TokenKind::Operator && t.lexeme == "&") {
        ++pos;
        flush_cell();
        continue;
      }
      cell.push_back(parse_scripted_atom());
    }
    if (table.children.empty()) raise(ErrorKind::ParseError, "empty cases environment");
    return table;
  }

  std::string read_env_name() {
    skip_ws();
    if (!at_kind(TokenKind::GroupOpen)) raise(ErrorKind::ParseError, "expected {environment}");
    ++pos;
    std::string name;
    while (!eof() && cur().kind != TokenKind::GroupClose) {
      if (cur().kind == TokenKind::Identifier)
        name += cur().lexeme;
      else
        raise(ErrorKind::ParseError, "bad environment name");
      ++pos;
    }
    if (eof()) raise(ErrorKind::UnbalancedGroup, "missing '}' after environment name");
    ++pos;
    return name;
  }
};

}  // namespace

ExprNode parse(const std::vector<Token>& tokens, const MacroRegistry& registry) {
  Parser p{tokens, registry};
  ExprNode tree = p.parse_all();
  p.skip_ws();
  if (!p.eof())
    raise(ErrorKind::ParseError, "trailing tokens at offset " + std::to_string(p.cur().position));
  return tree;
}

ExprNode parse_latex(const std::string& src, const MacroRegistry& registry) {
  ExprNode tree = parse(tokenize(src), registry);
  assign_ids(tree, 0);
  return tree;
}

// ---------------------------------------------------------------------------
// printing

namespace {

const ExprNode* find_marg(const ExprNode& t, const std::string& slot, bool is_shape_root) {
  if (!is_shape_root) {
    if (const std::string* m = t.attr("marg"); m && *m == slot) return &t;
    if (t.has_attr("macro")) return nullptr;  // nested macro owns its own slots
  }
  for (const auto& c : t.children)
    if (const ExprNode* hit = find_marg(c, slot, false)) return hit;
  return nullptr;
}

void print_rec(const ExprNode& t, std::string& out);

void append_piece(std::string& out, const std::string& piece) {
  if (piece.empty()) return;
  if (!out.empty() && piece[0] != '\0') {
    // a control word followed by a letter needs a separating blank
    size_t i = out.size();
    while (i > 0 && std::isalpha(static_cast<unsigned char>(out[i - 1]))) --i;
    bool prev_is_command = i > 0 && out[i - 1] == '\\' && i < out.size();
    if (prev_is_command && std::isalpha(static_cast<unsigned char>(piece[0]))) out += ' ';
  }
  out += piece;
}

std::string braced(const ExprNode& t) {
  std::string inner;
  print_rec(t, inner);
  return "{" + inner + "}";
}

bool print_macro_call(const ExprNode& t, std::string& out) {
  const std::string* name = t.attr("macro");
  if (!name) return false;
  std::string piece = *name;
  // optional args first, then mandatory, then @-separated
  std::string opts, mands, ats;
  for (int slot = 1; slot <= 16; ++slot) {
    const ExprNode* arg = find_marg(t, std::to_string(slot), true);
    if (!arg) continue;
    std::string body;
    print_rec(*arg, body);
    if (arg->has_attr("marg_opt"))
      opts += "[" + body + "]";
    else if (arg->has_attr("marg_at"))
      ats += "{" + body + "}";
    else
      mands += "{" + body + "}";
  }
  piece += opts + mands;
  if (!ats.empty()) piece += "@" + ats;
  append_piece(out, piece);
  return true;
}

void print_rec(const ExprNode& t, std::string& out) {
  if (print_macro_call(t, out)) return;
  if (t.has_attr("opname")) {
    append_piece(out, "\\operatorname{" + t.label + "}");
    return;
  }
  if (t.kind == NodeKind::Text) {
    const std::string* cmd = t.attr("textcmd");
    append_piece(out, (cmd ? *cmd : std::string("\\text")) + "{" + t.label + "}");
    return;
  }
  switch (t.kind) {
    case NodeKind::Row:
      for (const auto& c : t.children) print_rec(c, out);
      return;
    case NodeKind::Script: {
      const std::string* which = t.attr("script");
      const ExprNode& base_node = t.children.at(0);
      // compound or scripted bases need their grouping back
      bool brace_base = (base_node.is_row() && !base_node.has_attr("macro")) ||
                        base_node.kind == NodeKind::Script;
      std::string base;
      print_rec(base_node, base);
      if (brace_base) base = "{" + base + "}";
      append_piece(out, base);
      if (which && (*which == "sub" || *which == "subsup"))
        out += "_" + braced(t.children.at(1));
      if (which && *which == "sup") out += "^" + braced(t.children.at(1));
      if (which && *which == "subsup") out += "^" + braced(t.children.at(2));
      return;
    }
    case NodeKind::Fraction:
      append_piece(out, t.label + braced(t.children.at(0)) + braced(t.children.at(1)));
      return;
    case NodeKind::Radical: {
      std::string piece = t.label;
      if (t.children.size() > 1) {
        std::string idx;
        print_rec(t.children[1], idx);
        piece += "[" + idx + "]";
      }
      piece += braced(t.children.at(0));
      append_piece(out, piece);
      return;
    }
    case NodeKind::Table: {
      std::string piece = "\\begin{cases}";
      for (size_t r = 0; r < t.children.size(); ++r) {
        if (r) piece += " \\\\ ";
        const ExprNode& row = t.children[r];
        for (size_t c = 0; c < row.children.size(); ++c) {
          if (c) piece += " & ";
          std::string cell;
          print_rec(row.children[c], cell);
          piece += cell;
        }
      }
      piece += "\\end{cases}";
      append_piece(out, piece);
      return;
    }
    default:
      break;
  }
  if (!t.children.empty()) {  // \pmod, \tag
    std::string piece = t.label;
    for (const auto& c : t.children) piece += braced(c);
    append_piece(out, piece);
    return;
  }
  append_piece(out, t.label);
}

}  // namespace

std::string print_latex(const ExprNode& tree) {
  std::string out;
  print_rec(tree, out);
  return out;
}

}  // namespace mathcvt
