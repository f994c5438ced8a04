#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mathcvt {

/// Minimal XML document tree. Attribute order is preserved so that emission
/// is deterministic.
struct XmlNode {
  enum class Type { Element, Text };

  Type type = Type::Element;
  std::string name;  // element name; empty for text nodes
  std::string text;  // character data for text nodes
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;

  static XmlNode element(std::string n) {
    XmlNode x;
    x.name = std::move(n);
    return x;
  }
  static XmlNode text_node(std::string t) {
    XmlNode x;
    x.type = Type::Text;
    x.text = std::move(t);
    return x;
  }

  const std::string* attr(const std::string& key) const {
    for (const auto& [k, v] : attrs)
      if (k == key) return &v;
    return nullptr;
  }
  void set_attr(const std::string& key, const std::string& value) {
    for (auto& [k, v] : attrs)
      if (k == key) {
        v = value;
        return;
      }
    attrs.emplace_back(key, value);
  }

  /// Concatenated text of direct text children.
  std::string inner_text() const {
    std::string out;
    for (const auto& c : children)
      if (c.type == Type::Text) out += c.text;
    return out;
  }
};

/// Parses one XML document (prolog, comments, CDATA and character references
/// handled; namespaces kept verbatim). Throws XmlError on malformed input.
XmlNode xml_parse(const std::string& input);

/// Serializes with stable formatting: elements whose children are all
/// elements are indented one per line, text content stays inline.
std::string xml_write(const XmlNode& root);

std::string xml_escape_text(const std::string& s);
std::string xml_escape_attr(const std::string& s);

}  // namespace mathcvt
