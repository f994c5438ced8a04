#include "mathcvt/latex_tokens.hpp"

#include <array>
#include <cctype>
#include <map>

#include "mathcvt/error.hpp"

namespace mathcvt {

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::Operator: return "operator";
    case TokenKind::Relation: return "relation";
    case TokenKind::OpenFence: return "open-fence";
    case TokenKind::CloseFence: return "close-fence";
    case TokenKind::Command: return "command";
    case TokenKind::Text: return "text";
    case TokenKind::SubscriptMarker: return "subscript";
    case TokenKind::SuperscriptMarker: return "superscript";
    case TokenKind::GroupOpen: return "group-open";
    case TokenKind::GroupClose: return "group-close";
    case TokenKind::Whitespace: return "whitespace";
  }
  return "token";
}

namespace {

// Unicode glyph -> canonical command spelling.
const std::map<std::string, std::string>& glyph_commands() {
  static const std::map<std::string, std::string> table = {
      {"α", "\\alpha"},   {"β", "\\beta"},    {"γ", "\\gamma"},
      {"δ", "\\delta"},   {"ε", "\\epsilon"}, {"ζ", "\\zeta"},
      {"η", "\\eta"},     {"θ", "\\theta"},   {"λ", "\\lambda"},
      {"μ", "\\mu"},      {"ν", "\\nu"},      {"ξ", "\\xi"},
      {"π", "\\pi"},      {"ρ", "\\rho"},     {"σ", "\\sigma"},
      {"τ", "\\tau"},     {"φ", "\\phi"},     {"χ", "\\chi"},
      {"ψ", "\\psi"},     {"ω", "\\omega"},   {"Γ", "\\Gamma"},
      {"Δ", "\\Delta"},   {"Σ", "\\Sigma"},   {"Ω", "\\Omega"},
      {"Φ", "\\Phi"},     {"Ψ", "\\Psi"},     {"ℜ", "\\Re"},
      {"ℑ", "\\Im"},      {"⇒", "\\Rightarrow"}, {"⇐", "\\Leftarrow"},
      {"⇔", "\\Leftrightarrow"}, {"→", "\\to"}, {"∨", "\\lor"},
      {"∧", "\\land"},    {"¬", "\\neg"},     {"≤", "\\leq"},
      {"≥", "\\geq"},     {"≠", "\\neq"},     {"≈", "\\approx"},
      {"≡", "\\equiv"},   {"∈", "\\in"},      {"∞", "\\infty"},
      {"±", "\\pm"},      {"⋅", "\\cdot"},    {"×", "\\times"},
      {"÷", "\\div"},     {"†", "\\dagger"},  {"′", "\\prime"},
      {"∘", "\\circ"},    {"∂", "\\partial"}, {"∇", "\\nabla"},
  };
  return table;
}

bool is_relation_char(char c) { return c == '=' || c == '<' || c == '>'; }

bool is_operator_char(char c) {
  switch (c) {
    case '+': case '-': case '*': case '/': case '\'': case '!': case '@':
    case '&': case ',': case ';': case ':': case '~': case '.':
      return true;
    default:
      return false;
  }
}

size_t utf8_len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 0;
}

}  // namespace

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  size_t pos = 0;
  int group_depth = 0;
  bool pipe_open = false;  // bars alternate open/close
  auto push = [&](TokenKind kind, std::string lexeme, size_t at) {
    out.push_back(Token{kind, std::move(lexeme), at});
  };
  auto pipe_kind = [&] {
    pipe_open = !pipe_open;
    return pipe_open ? TokenKind::OpenFence : TokenKind::CloseFence;
  };

  while (pos < src.size()) {
    size_t start = pos;
    unsigned char c = static_cast<unsigned char>(src[pos]);

    if (c == '%') {  // comment runs to end of line, newline included
      size_t end = src.find('\n', pos);
      end = (end == std::string::npos) ? src.size() : end + 1;
      push(TokenKind::Whitespace, src.substr(pos, end - pos), start);
      pos = end;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      size_t end = pos;
      while (end < src.size() && (src[end] == ' ' || src[end] == '\t' || src[end] == '\n' || src[end] == '\r'))
        ++end;
      push(TokenKind::Whitespace, src.substr(pos, end - pos), start);
      pos = end;
      continue;
    }
    if (c < 0x20) raise(ErrorKind::IllegalCharacter, "control byte at offset " + std::to_string(pos));

    if (c == '\\') {
      if (pos + 1 >= src.size())
        raise(ErrorKind::IllegalCharacter, "dangling backslash at offset " + std::to_string(pos));
      char next = src[pos + 1];
      if (std::isalpha(static_cast<unsigned char>(next))) {
        size_t end = pos + 1;
        while (end < src.size() && std::isalpha(static_cast<unsigned char>(src[end]))) ++end;
        push(TokenKind::Command, src.substr(pos, end - pos), start);
        pos = end;
        continue;
      }
      // single-character control sequences
      std::string lex = src.substr(pos, 2);
      pos += 2;
      switch (next) {
        case '{': push(TokenKind::OpenFence, lex, start); break;
        case '}': push(TokenKind::CloseFence, lex, start); break;
        case '|': push(pipe_kind(), lex, start); break;
        case ',': case '!': case ';': case ':': case '>': case ' ':
          push(TokenKind::Whitespace, lex, start);
          break;
        case '\\': push(TokenKind::Command, lex, start); break;
        case '%': case '&': case '#': case '$': case '_':
          push(TokenKind::Operator, lex, start);
          break;
        default: push(TokenKind::Command, lex, start); break;
      }
      continue;
    }

    if (std::isdigit(c)) {
      push(TokenKind::Number, std::string(1, static_cast<char>(c)), start);
      ++pos;
      continue;
    }
    if (std::isalpha(c)) {
      push(TokenKind::Identifier, std::string(1, static_cast<char>(c)), start);
      ++pos;
      continue;
    }

    if (c < 0x80) {
      std::string lex(1, static_cast<char>(c));
      ++pos;
      switch (c) {
        case '{':
          ++group_depth;
          push(TokenKind::GroupOpen, lex, start);
          break;
        case '}':
          if (group_depth == 0)
            raise(ErrorKind::UnbalancedGroup, "unmatched '}' at offset " + std::to_string(start));
          --group_depth;
          push(TokenKind::GroupClose, lex, start);
          break;
        case '_': push(TokenKind::SubscriptMarker, lex, start); break;
        case '^': push(TokenKind::SuperscriptMarker, lex, start); break;
        case '(': case '[': push(TokenKind::OpenFence, lex, start); break;
        case ')': case ']': push(TokenKind::CloseFence, lex, start); break;
        case '|': push(pipe_kind(), lex, start); break;
        default:
          if (is_relation_char(static_cast<char>(c)))
            push(TokenKind::Relation, lex, start);
          else if (is_operator_char(static_cast<char>(c)))
            push(TokenKind::Operator, lex, start);
          else
            raise(ErrorKind::IllegalCharacter,
                  "unsupported character '" + lex + "' at offset " + std::to_string(start));
      }
      continue;
    }

    // multi-byte UTF-8
    size_t len = utf8_len(c);
    if (len == 0 || pos + len > src.size())
      raise(ErrorKind::IllegalCharacter, "invalid UTF-8 at offset " + std::to_string(pos));
    std::string glyph = src.substr(pos, len);
    pos += len;
    auto it = glyph_commands().find(glyph);
    if (it != glyph_commands().end()) {
      push(TokenKind::Command, it->second, start);
    } else {
      push(TokenKind::Identifier, glyph, start);
    }
  }
  if (group_depth != 0) raise(ErrorKind::UnbalancedGroup, "unmatched '{' in input");
  return out;
}

namespace {

bool is_strip_command(const std::string& name) {
  static const std::array<const char*, 8> names = {
      "\\displaystyle", "\\textstyle", "\\scriptstyle", "\\scriptscriptstyle",
      "\\limits", "\\nolimits", "\\nonumber", "\\mathstrut"};
  for (const char* n : names)
    if (name == n) return true;
  return false;
}

bool is_size_command(const std::string& name) {
  static const std::array<const char*, 10> names = {
      "\\left", "\\right", "\\big", "\\Big", "\\bigg", "\\Bigg",
      "\\bigl", "\\bigr", "\\Bigl", "\\Bigr"};
  for (const char* n : names)
    if (name == n) return true;
  return false;
}

}  // namespace

std::string strip_formatting(const std::string& src) {
  std::vector<Token> tokens = tokenize(src);
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::Whitespace) {
      if (t.lexeme[0] == '%') continue;         // comment with its line break
      if (t.lexeme[0] == '\\') continue;        // spacing macro
      if (!out.empty() && out.back() == ' ') continue;
      out += ' ';
      continue;
    }
    if (t.kind == TokenKind::Command) {
      if (is_strip_command(t.lexeme)) continue;
      if (is_size_command(t.lexeme)) {
        // \left. / \right. delimiters vanish entirely
        if (i + 1 < tokens.size() && tokens[i + 1].lexeme == "." &&
            tokens[i + 1].kind == TokenKind::Operator)
          ++i;
        continue;  // keep only the delimiter that follows
      }
    }
    out += t.lexeme;
  }
  // trim
  size_t b = out.find_first_not_of(' ');
  if (b == std::string::npos) return "";
  size_t e = out.find_last_not_of(' ');
  return out.substr(b, e - b + 1);
}

}  // namespace mathcvt
