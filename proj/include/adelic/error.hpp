#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adelic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SortError : public Error {
 public:
  using Error::Error;
};

class UnknownSymbol : public Error {
 public:
  using Error::Error;
};

// Raised when an exhaustive computation would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// An engine disagreed with its independent oracle. Never downgraded to a warning.
class OracleMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace adelic
