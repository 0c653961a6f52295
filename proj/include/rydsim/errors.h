#pragma once

#include <stdexcept>
#include <string>

namespace rydsim {

/// Invalid level scheme, blockade settings or run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside an operation's domain (caps exceeded, zero matrix, unreachable target, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine failed to meet its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string &message)
      : std::runtime_error(
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace rydsim
