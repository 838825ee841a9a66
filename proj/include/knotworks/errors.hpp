#pragma once

#include <stdexcept>
#include <string>

namespace knotworks {

// Invalid input: malformed files, violated invariants, bad preconditions.
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A configurable enumeration or search budget ran out before the operation
// could complete. The CLI maps this to exit code 3.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace knotworks
