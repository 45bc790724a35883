#pragma once

#include <stdexcept>
#include <string>

namespace sparsecut {

/// Bad input: malformed files, invalid parameters, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical solver failed to reach its tolerance or hit a degenerate state.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparsecut
