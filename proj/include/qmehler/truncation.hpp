#pragma once

#include <stdexcept>

namespace qmehler {

/// Controls truncation of all infinite sums and products in the library.
///
/// Products stop once a certified geometric tail bound drops below `tol`;
/// series stop once consecutive partial sums stabilize below `tol` (see the
/// individual operations). `max_terms` is a hard cap; hitting it does not
/// throw, it is reported through the tail bound of the result.
struct TruncationPolicy {
  double tol = 1e-12;
  long max_terms = 100000;
  bool report_tail_bound = false;

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("TruncationPolicy: tol must be > 0");
    if (max_terms < 1) throw std::invalid_argument("TruncationPolicy: max_terms must be >= 1");
  }
};

/// A truncated infinite sum/product together with its tail-bound estimate.
struct TruncatedValue {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on |exact - value|
  long terms = 0;           // number of factors/terms consumed
};

}  // namespace qmehler
