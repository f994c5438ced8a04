#include "mathcvt/xml.hpp"

#include <cctype>

#include "mathcvt/error.hpp"

namespace mathcvt {

namespace {

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}
bool name_char(char c) {
  return name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

struct XmlParser {
  const std::string& src;
  size_t pos = 0;
  int depth = 0;
  static constexpr int kMaxDepth = 512;

  [[noreturn]] void fail(const std::string& msg) const {
    raise(ErrorKind::XmlError, msg + " at offset " + std::to_string(pos));
  }

  bool eof() const { return pos >= src.size(); }
  char peek() const { return src[pos]; }
  bool starts_with(const char* s) const { return src.compare(pos, std::char_traits<char>::length(s), s) == 0; }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string read_name() {
    if (eof() || !name_start(peek())) fail("expected name");
    size_t start = pos;
    while (!eof() && name_char(peek())) ++pos;
    return src.substr(start, pos - start);
  }

  std::string decode_entity() {
    // pos is on '&'
    size_t semi = src.find(';', pos);
    if (semi == std::string::npos || semi - pos > 12) fail("unterminated entity");
    std::string ent = src.substr(pos + 1, semi - pos - 1);
    pos = semi + 1;
    if (ent == "amp") return "&";
    if (ent == "lt") return "<";
    if (ent == "gt") return ">";
    if (ent == "quot") return "\"";
    if (ent == "apos") return "'";
    if (!ent.empty() && ent[0] == '#') {
      long code = 0;
      try {
        code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                   ? std::stol(ent.substr(2), nullptr, 16)
                   : std::stol(ent.substr(1), nullptr, 10);
      } catch (...) {
        fail("bad character reference &" + ent + ";");
      }
      // encode as UTF-8
      std::string out;
      unsigned long cp = static_cast<unsigned long>(code);
      if (cp < 0x80) {
        out += static_cast<char>(cp);
      } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      }
      return out;
    }
    fail("unknown entity &" + ent + ";");
  }

  std::string read_attr_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    char quote = peek();
    ++pos;
    std::string out;
    while (!eof() && peek() != quote) {
      if (peek() == '&')
        out += decode_entity();
      else
        out += src[pos++];
    }
    expect(quote);
    return out;
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<?")) {
        size_t end = src.find("?>", pos);
        if (end == std::string::npos) fail("unterminated processing instruction");
        pos = end + 2;
      } else if (starts_with("<!--")) {
        size_t end = src.find("-->", pos);
        if (end == std::string::npos) fail("unterminated comment");
        pos = end + 3;
      } else if (starts_with("<!DOCTYPE") || starts_with("<!doctype")) {
        size_t end = src.find('>', pos);
        if (end == std::string::npos) fail("unterminated doctype");
        pos = end + 1;
      } else {
        return;
      }
    }
  }

  XmlNode parse_element() {
    if (++depth > kMaxDepth) fail("element nesting too deep");
    expect('<');
    XmlNode node = XmlNode::element(read_name());
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (peek() == '/') {
        ++pos;
        expect('>');
        --depth;
        return node;  // self-closing
      }
      if (peek() == '>') {
        ++pos;
        break;
      }
      std::string key = read_name();
      skip_ws();
      expect('=');
      skip_ws();
      std::string value = read_attr_value();
      if (node.attr(key)) fail("duplicate attribute " + key);
      node.attrs.emplace_back(std::move(key), std::move(value));
    }
    parse_content(node);
    return node;
  }

  void parse_content(XmlNode& node) {
    std::string text;
    auto flush_text = [&] {
      if (text.empty()) return;
      node.children.push_back(XmlNode::text_node(text));
      text.clear();
    };
    for (;;) {
      if (eof()) fail("missing end tag for <" + node.name + ">");
      if (peek() == '<') {
        if (starts_with("</")) {
          flush_text();
          pos += 2;
          std::string closing = read_name();
          if (closing != node.name)
            fail("mismatched end tag </" + closing + "> for <" + node.name + ">");
          skip_ws();
          expect('>');
          strip_layout_whitespace(node);
          --depth;
          return;
        }
        if (starts_with("<!--")) {
          size_t end = src.find("-->", pos);
          if (end == std::string::npos) fail("unterminated comment");
          pos = end + 3;
          continue;
        }
        if (starts_with("<![CDATA[")) {
          size_t end = src.find("]]>", pos);
          if (end == std::string::npos) fail("unterminated CDATA");
          text += src.substr(pos + 9, end - pos - 9);
          pos = end + 3;
          continue;
        }
        if (starts_with("<?")) {
          size_t end = src.find("?>", pos);
          if (end == std::string::npos) fail("unterminated processing instruction");
          pos = end + 2;
          continue;
        }
        flush_text();
        node.children.push_back(parse_element());
        continue;
      }
      if (peek() == '&') {
        text += decode_entity();
        continue;
      }
      text += src[pos++];
    }
  }

  // Pretty-printing whitespace between sibling elements is layout, not data.
  static void strip_layout_whitespace(XmlNode& node) {
    bool has_element = false;
    for (const auto& c : node.children)
      if (c.type == XmlNode::Type::Element) has_element = true;
    if (!has_element) return;
    std::vector<XmlNode> kept;
    kept.reserve(node.children.size());
    for (auto& c : node.children) {
      if (c.type == XmlNode::Type::Text &&
          c.text.find_first_not_of(" \t\r\n") == std::string::npos)
        continue;
      kept.push_back(std::move(c));
    }
    node.children = std::move(kept);
  }
};

void write_rec(const XmlNode& node, std::string& out, int indent) {
  if (node.type == XmlNode::Type::Text) {
    out += xml_escape_text(node.text);
    return;
  }
  out += '<';
  out += node.name;
  for (const auto& [k, v] : node.attrs) {
    out += ' ';
    out += k;
    out += "=\"";
    out += xml_escape_attr(v);
    out += '"';
  }
  if (node.children.empty()) {
    out += "/>";
    return;
  }
  out += '>';
  bool element_only = true;
  for (const auto& c : node.children)
    if (c.type == XmlNode::Type::Text) element_only = false;
  if (element_only) {
    for (const auto& c : node.children) {
      out += '\n';
      out.append(static_cast<size_t>(indent + 2), ' ');
      write_rec(c, out, indent + 2);
    }
    out += '\n';
    out.append(static_cast<size_t>(indent), ' ');
  } else {
    for (const auto& c : node.children) write_rec(c, out, indent);
  }
  out += "</";
  out += node.name;
  out += '>';
}

}  // namespace

XmlNode xml_parse(const std::string& input) {
  XmlParser p{input, 0};
  p.skip_misc();
  if (p.eof() || p.peek() != '<') p.fail("expected root element");
  XmlNode root = p.parse_element();
  p.skip_misc();
  if (!p.eof()) p.fail("trailing content after root element");
  return root;
}

std::string xml_write(const XmlNode& root) {
  std::string out;
  write_rec(root, out, 0);
  out += '\n';
  return out;
}

std::string xml_escape_text(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string xml_escape_attr(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace mathcvt
