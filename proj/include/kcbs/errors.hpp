#pragma once

#include <stdexcept>
#include <string>

namespace kcbs {

/// Raised when a computation reaches a state with no defined value
/// (conditioning on zero survival, unidentifiable efficiency fit, ...).
/// Contract violations on inputs throw std::invalid_argument instead.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kcbs
