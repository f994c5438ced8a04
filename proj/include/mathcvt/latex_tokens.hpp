#pragma once

#include <string>
#include <vector>

namespace mathcvt {

enum class TokenKind {
  Identifier,
  Number,
  Operator,
  Relation,
  OpenFence,
  CloseFence,
  Command,
  Text,
  SubscriptMarker,
  SuperscriptMarker,
  GroupOpen,
  GroupClose,
  Whitespace,
};

const char* to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string lexeme;
  size_t position = 0;  // byte offset into the source
};

/// Splits a math-mode LaTeX string into tokens. Whitespace (including
/// comments and spacing macros like \, and \!) is kept as Whitespace tokens,
/// so concatenating all lexemes reproduces the input byte for byte. Known
/// unicode math glyphs are normalized to their command spelling.
/// Throws UnbalancedGroup / IllegalCharacter.
std::vector<Token> tokenize(const std::string& src);

/// Removes display-only markup: spacing macros, comments with their line
/// breaks, delimiter scaling (\left, \big, ...) and style switches. Runs of
/// blanks collapse to one space. Idempotent; semantics-bearing tokens pass
/// through untouched.
std::string strip_formatting(const std::string& src);

}  // namespace mathcvt
