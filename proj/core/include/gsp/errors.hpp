#pragma once

#include <stdexcept>
#include <string>

namespace gsp {

// Error taxonomy maps onto the CLI exit-code contract:
//   ConfigError (and ParseError) -> 2, NumericalError -> 3, BudgetError -> 4.

/// Bad input: malformed files, invalid parameters, inconsistent options.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Syntax or semantic error in a grid/config file, with a 1-based line number.
class ParseError : public ConfigError {
public:
  ParseError(const std::string& msg, int line)
      : ConfigError("line " + std::to_string(line) + ": " + msg), line_(line) {}

  int line() const { return line_; }

private:
  int line_;
};

/// Numerical failure: singular reduction, diverging integration, zero damping.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Search-space budget exceeded (brute force on a space that calls for CE).
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsp
