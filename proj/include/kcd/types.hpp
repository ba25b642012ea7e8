#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kcd {

// Row/column/iteration index type used across the library. Signed so that
// arithmetic on differences and reverse loops stays unsurprising.
using Index = std::int64_t;

// A token could not be lexed as a number or violated basic token shape.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Tokens lexed fine but the content violates a structural rule
// (one-based indices, strictly increasing indices, label conventions).
class format_error : public std::runtime_error {
 public:
  explicit format_error(const std::string& what, std::size_t line = 0)
      : std::runtime_error(
            line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A numerical invariant failed at runtime (non-positive curvature,
// factorization breakdown). Distinct from argument errors: the inputs were
// well-formed but the arithmetic cannot proceed.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request exceeds a deliberate capacity limit (for example a dense Gram
// matrix over the configured cap).
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kcd
