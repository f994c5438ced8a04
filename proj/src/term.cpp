#include "mathcvt/term.hpp"

#include <cctype>

#include "mathcvt/error.hpp"

namespace mathcvt {

namespace {

struct TermParser {
  const std::string& src;
  size_t pos = 0;
  bool allow_vars;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool atom_char(char c) const {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',';
  }

  std::string read_atom() {
    size_t start = pos;
    while (pos < src.size() && atom_char(src[pos])) ++pos;
    if (pos == start) raise(ErrorKind::FormatError, "expected term atom at offset " + std::to_string(pos));
    return src.substr(start, pos - start);
  }

  static NodeKind classify(const std::string& label) {
    if (label.empty()) return NodeKind::Generic;
    bool numeric = true;
    for (char c : label)
      if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') numeric = false;
    if (numeric) return NodeKind::Number;
    if (label.size() == 1 && std::isalpha(static_cast<unsigned char>(label[0])))
      return NodeKind::Identifier;
    return NodeKind::Generic;
  }

  ExprNode parse_node() {
    skip_ws();
    if (pos >= src.size()) raise(ErrorKind::FormatError, "unexpected end of term");
    std::string atom = read_atom();
    ExprNode node(atom, classify(atom));
    if (!atom.empty() && atom[0] == '?') {
      if (!allow_vars) raise(ErrorKind::FormatError, "pattern variable not allowed here: " + atom);
      if (atom.size() < 2) raise(ErrorKind::FormatError, "empty variable name");
      node.kind = NodeKind::Generic;
      node.attrs["var"] = "1";
    }
    skip_ws();
    if (pos < src.size() && src[pos] == '(') {
      if (node.has_attr("var")) raise(ErrorKind::FormatError, "variable cannot take arguments: " + atom);
      ++pos;
      skip_ws();
      if (pos < src.size() && src[pos] == ')') {
        ++pos;
        return node;
      }
      while (true) {
        node.children.push_back(parse_node());
        skip_ws();
        if (pos >= src.size()) raise(ErrorKind::FormatError, "unterminated argument list");
        if (src[pos] == ',') {
          ++pos;
          continue;
        }
        if (src[pos] == ')') {
          ++pos;
          break;
        }
        raise(ErrorKind::FormatError, "expected ',' or ')' at offset " + std::to_string(pos));
      }
    }
    return node;
  }
};

}  // namespace

ExprNode parse_term(const std::string& text, bool allow_vars) {
  TermParser p{text, 0, allow_vars};
  ExprNode node = p.parse_node();
  p.skip_ws();
  if (p.pos != text.size())
    raise(ErrorKind::FormatError, "trailing characters after term at offset " + std::to_string(p.pos));
  return node;
}

std::string print_term(const ExprNode& t) {
  std::string out = t.label;
  if (!t.children.empty()) {
    out += '(';
    for (size_t i = 0; i < t.children.size(); ++i) {
      if (i) out += ',';
      out += print_term(t.children[i]);
    }
    out += ')';
  }
  return out;
}

}  // namespace mathcvt
