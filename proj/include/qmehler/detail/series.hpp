#pragma once

#include <cmath>

#include "qmehler/truncation.hpp"

namespace qmehler::detail {

/// Adaptive series accumulator: converged once three consecutive terms stay
/// below tol/10 in magnitude (and at least a few terms were consumed).
class StableSum {
 public:
  explicit StableSum(const TruncationPolicy& policy) : tol_(policy.tol * 0.1) {}

  void add(double term) {
    sum_ += term;
    small_ = (std::fabs(term) < tol_) ? small_ + 1 : 0;
    ++terms_;
  }
  bool converged() const { return terms_ >= 4 && small_ >= 3; }
  double value() const { return sum_; }
  long terms() const { return terms_; }

 private:
  double tol_;
  double sum_ = 0.0;
  int small_ = 0;
  long terms_ = 0;
};

/// Rolling continuous q-Hermite recurrence h_{k+1} = 2 xhat h_k - (1-q^k) h_{k-1}.
/// Amplitudes stay bounded for xhat inside (-1, 1), so series built on it never
/// overflow even when H_n itself would.
struct HRoll {
  double prev = 0.0, cur = 1.0, qk = 1.0;
  double q, two_x;
  HRoll(double xhat, double q_param) : q(q_param), two_x(2.0 * xhat) {}
  void step() {
    double next = two_x * cur - (1.0 - qk) * prev;
    prev = cur;
    cur = next;
    qk *= q;
  }
  void advance(long n) {
    for (long k = 0; k < n; ++k) step();
  }
};

/// Rolling probabilistic Hermite recurrence (the q = 1 branches).
struct HeRoll {
  double prev = 0.0, cur = 1.0;
  double x;
  long k = 0;
  explicit HeRoll(double x_param) : x(x_param) {}
  void step() {
    double next = x * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
    ++k;
  }
  void advance(long n) {
    for (long j = 0; j < n; ++j) step();
  }
};

inline double scaled_abscissa(double x, double q) { return 0.5 * x * std::sqrt(1.0 - q); }

}  // namespace qmehler::detail
