#pragma once

#include <stdexcept>
#include <string>

namespace k3e {

// Input rejected before any numerics ran: wrong degrees, malformed data,
// evaluation at a point excluded by a precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric routine could not reach its tolerance or landed in a
// degenerate configuration (non-convergent AGM, singular Jacobian, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an evaluation point sits on a pole of the Weierstrass
// p-function. Callers that can absorb the pole (the section point of a
// fibration) catch this; everyone else treats it as an error.
class PoleSignal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace k3e
