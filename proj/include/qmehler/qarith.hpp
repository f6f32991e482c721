#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

#include "qmehler/errors.hpp"
#include "qmehler/truncation.hpp"

namespace qmehler {

/// Arbitrary-precision rational scalar. Always kept in lowest terms with a
/// positive denominator (canonical form is maintained by the backend).
/// Expression templates are off so arithmetic yields plain values, which keeps
/// the generic recurrence templates deducible.
using ExactScalar = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using ExactInt = boost::multiprecision::cpp_int;

/// Any commutative ring with unit we evaluate recurrences over:
/// double, ExactScalar, std::complex<double>.
template <class S>
concept RingScalar = requires(S a, S b) {
  { a + b } -> std::convertible_to<S>;
  { a - b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  S(0);
  S(1);
};

inline double to_double(const ExactScalar& r) { return static_cast<double>(r); }
inline double to_double(double x) { return x; }

/// Parses "p/q", an integer, or a plain decimal ("0.25") into an exact rational.
ExactScalar rational_from_string(std::string_view text);

/// "p/q" (or just "p" when the denominator is 1).
std::string rational_to_string(const ExactScalar& r);

/// k*(k-1)/2, the exponent of q in the ubiquitous q^C(k,2) factors.
constexpr long choose2(long k) { return k * (k - 1) / 2; }

template <RingScalar S>
S int_pow(const S& base, long e) {
  S acc(1);
  S b = base;
  for (long n = e; n > 0; n >>= 1) {
    if (n & 1) acc = acc * b;
    if (n > 1) b = b * b;
  }
  return acc;
}

/// Ordinary binomial coefficient as a ring scalar (exact for ExactScalar).
template <RingScalar S>
S binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return S(0);
  k = std::min(k, n - k);
  S c(1);
  for (long j = 1; j <= k; ++j) c = c * S(n - k + j) / S(j);
  return c;
}

/// [n]_q = 1 + q + ... + q^{n-1}; [0]_q = 0.
template <RingScalar S>
S q_number(long n, const S& q) {
  S acc(0);
  S p(1);
  for (long j = 0; j < n; ++j) {
    acc = acc + p;
    p = p * q;
  }
  return acc;
}

/// [n]_q! = prod_{j=1..n} [j]_q; [0]_q! = 1.
template <RingScalar S>
S q_factorial(long n, const S& q) {
  S acc(1);
  S bracket(0);  // [j]_q built incrementally: [j]_q = q*[j-1]_q + 1
  for (long j = 1; j <= n; ++j) {
    bracket = bracket * q + S(1);
    acc = acc * bracket;
  }
  return acc;
}

/// Gaussian binomial [n k]_q; 0 unless n >= k >= 0.
///
/// Evaluated by the product form prod_{j=1..k} (1-q^{n-k+j})/(1-q^j), which
/// stays exact over rationals; q = 1 takes the ordinary-binomial branch since
/// the product form degenerates there.
template <RingScalar S>
S q_binomial(long n, long k, const S& q) {
  if (k < 0 || n < k) return S(0);
  if (k == 0 || k == n) return S(1);
  if (q == S(1)) return binomial<S>(n, k);
  S num(1), den(1);
  S qj = int_pow(q, n - k);  // q^{n-k+j} runs from j=1
  S qlow(1);                 // q^j
  for (long j = 1; j <= k; ++j) {
    qj = qj * q;
    qlow = qlow * q;
    num = num * (S(1) - qj);
    den = den * (S(1) - qlow);
  }
  return num / den;
}

/// Finite q-Pochhammer (a;q)_n = prod_{j=0..n-1} (1 - a q^j); (a;q)_0 = 1.
template <RingScalar S>
S q_pochhammer(const S& a, const S& q, long n) {
  S acc(1);
  S aq = a;
  for (long j = 0; j < n; ++j) {
    acc = acc * (S(1) - aq);
    aq = aq * q;
  }
  return acc;
}

/// (a;q)_infinity, truncated once the geometric tail bound
/// |log prod_{j>J}(1-aq^j)| <= |a||q|^{J+1} / ((1-|q|)(1-|a|))
/// falls below policy.tol. Requires |a| < 1 and |q| < 1.
TruncatedValue q_pochhammer_inf_full(double a, double q, const TruncationPolicy& policy);

inline double q_pochhammer_inf(double a, double q, const TruncationPolicy& policy = {}) {
  return q_pochhammer_inf_full(a, q, policy).value;
}

/// log (a;q)_infinity with the same truncation rule; all factors must be
/// positive, which holds for |a| < 1, |q| < 1.
TruncatedValue log_q_pochhammer_inf(double a, double q, const TruncationPolicy& policy);

/// Guards for the paper's standing assumption -1 < q <= 1.
inline void require_q_param(double q) {
  if (!(q > -1.0 && q <= 1.0)) throw DomainError("q must satisfy -1 < q <= 1");
}
inline void require_q_param(const ExactScalar& q) {
  if (!(q > -1 && q <= 1)) throw DomainError("q must satisfy -1 < q <= 1");
}

/// Guard for operations that need convergent infinite products: |q| < 1.
inline void require_q_inside_unit(double q) {
  require_q_param(q);
  if (!(std::fabs(q) < 1.0)) throw DomainError("operation requires |q| < 1");
}

}  // namespace qmehler
