#pragma once

#include <stdexcept>

namespace cellia {

/// A constructed object violated one of its own invariants; always a bug.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// Numerically degenerate input (rank-deficient where full rank is required).
struct degenerate_input : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An exact search refused to run past its enumeration budget.
struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cellia
