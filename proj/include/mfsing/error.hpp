#pragma once

#include <stdexcept>
#include <string>

namespace mfsing {

/// Failure categories. Each maps to one CLI exit code (see cli.hpp).
enum class ErrorKind {
  Parse,         // malformed textual input
  Precondition,  // ring mismatch, non-isolated germ, bad index, ...
  Budget,        // a degree cap or search budget ran out before a certificate
  Unsupported,   // input valid but outside what the exact polynomial model handles
  Internal,      // an invariant of the library itself was violated
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] inline void precondition_failed(const std::string& what) {
  throw Error(ErrorKind::Precondition, what);
}

[[noreturn]] inline void budget_exhausted(const std::string& what) {
  throw Error(ErrorKind::Budget, what);
}

[[noreturn]] inline void internal_error(const std::string& what) {
  throw Error(ErrorKind::Internal, what);
}

}  // namespace mfsing
