#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace majorant {

/// Raised when an argument lies outside the mathematical domain of an
/// operation (p < 1, tau outside [0,1], odd p for an even-only path, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a quadrature grid is too coarse for the frequencies it must
/// resolve.
class SizingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace majorant
