#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kisram {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A valuation or comparison needs more certified terms than are available.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// Solving would require a residue field larger than the configured cap.
class ExtensionCapExceeded : public Error {
 public:
  using Error::Error;
};

class IncompatibleFields : public Error {
 public:
  using Error::Error;
};

class NonUnit : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NotEHeightOne : public Error {
 public:
  using Error::Error;
};

class NotPrepared : public Error {
 public:
  using Error::Error;
};

class NonContractive : public Error {
 public:
  using Error::Error;
};

class NotTriangularizable : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but outside what the engine supports (e.g. f > 1 at level n >= 2).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Semantically invalid input: non-prime p, d > h, i outside (0, 1], ...
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a literal or module file; carries a 1-based location.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace kisram
