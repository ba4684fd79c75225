#pragma once

#include <stdexcept>
#include <string>

namespace pathkernel {

/// Invalid input: bad model parameters, malformed points, cemetery where a
/// metric point is required, unsupported model for an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver its contract (quadrature did not
/// converge, a series exceeded its term budget, a rejection loop ran out).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integral or supremum that does not exist (e.g. Cauchy fourth moment).
class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace pathkernel
