#pragma once

#include <stdexcept>
#include <string>

namespace qmehler {

/// Parameter or argument outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (e.g. Cholesky of a near-singular Gram matrix).
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadrature refinement stalled above the requested target error.
class ConvergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A verification-suite selection named a check that does not exist.
class UnknownCheckError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qmehler
