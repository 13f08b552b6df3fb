#pragma once

#include <stdexcept>
#include <string>

namespace rg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nobody bet on the realized outcome, so the pari-mutuel payout is undefined.
class ZeroPoolError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Derivative requested at a jump of the map.
class NotDifferentiableError : public Error {
 public:
  using Error::Error;
};

// Convergence prediction requested at a repelling fixed point.
class UnstableFixedPointError : public Error {
 public:
  using Error::Error;
};

// Power-law fit fed a value <= 0 inside the fit window.
class NonPositiveDataError : public Error {
 public:
  using Error::Error;
};

// Every player has likelihood zero for the requested outcome count.
class DegenerateAllZeroError : public Error {
 public:
  using Error::Error;
};

// A series with no points where at least one is required.
class EmptySeriesError : public Error {
 public:
  using Error::Error;
};

// Malformed structured text (spec files, piecewise map tables).
class ParseError : public Error {
 public:
  ParseError(const std::string& origin, int line, int column, const std::string& what)
      : Error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input with an invalid value; remembers which key was bad.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& key, const std::string& what)
      : Error("invalid value for '" + key + "': " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace rg
