#pragma once

#include <stdexcept>
#include <string>

namespace mathcvt {

enum class ErrorKind {
  UnbalancedGroup,
  IllegalCharacter,
  UnknownMacro,
  ArityError,
  DuplicateMacro,
  FormatError,
  XmlError,
  NotMathML,
  InvalidCostModel,
  EmptyQuery,
  SchemaError,
  ParseError,
  EmptyResults,
  AmbiguityUnresolved,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception carrying a machine-checkable kind.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnbalancedGroup: return "UnbalancedGroup";
    case ErrorKind::IllegalCharacter: return "IllegalCharacter";
    case ErrorKind::UnknownMacro: return "UnknownMacro";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::DuplicateMacro: return "DuplicateMacro";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::XmlError: return "XmlError";
    case ErrorKind::NotMathML: return "NotMathML";
    case ErrorKind::InvalidCostModel: return "InvalidCostModel";
    case ErrorKind::EmptyQuery: return "EmptyQuery";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyResults: return "EmptyResults";
    case ErrorKind::AmbiguityUnresolved: return "AmbiguityUnresolved";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace mathcvt
