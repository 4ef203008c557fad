#pragma once

#include <stdexcept>
#include <string>

namespace stablerank {

/// Malformed text input (frames, barcodes, graphs, contours, rationals).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain. The message names the violated condition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A brute-force search would exceed its enumeration budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw PreconditionError(what);
}

}  // namespace stablerank
