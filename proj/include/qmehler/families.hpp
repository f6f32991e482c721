#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "qmehler/polyalg.hpp"
#include "qmehler/qarith.hpp"

namespace qmehler {

/// Forward three-term recurrences are certified stable only inside S(q);
/// scalar evaluators refuse larger degrees unless the caller raises the cap.
inline constexpr long kDefaultDegreeCap = 64;

namespace detail {
inline double approx_abs(double x) { return std::fabs(x); }
inline double approx_abs(const ExactScalar& x) { return std::fabs(to_double(x)); }
inline double approx_abs(const std::complex<double>& x) { return std::abs(x); }

inline void check_degree(long n, long cap) {
  if (n < 0) throw DomainError("polynomial degree must be nonnegative");
  if (n > cap) throw DomainError("degree exceeds the stability cap (raise degree_cap to override)");
}
}  // namespace detail

/// Support interval S(q) = [-2/sqrt(1-q), 2/sqrt(1-q)] for |q| < 1, all of R at q = 1.
struct SupportInterval {
  double q;

  explicit SupportInterval(double q_param) : q(q_param) { require_q_param(q); }

  double half_width() const {
    return q == 1.0 ? std::numeric_limits<double>::infinity() : 2.0 / std::sqrt(1.0 - q);
  }
  bool contains(double x) const { return q == 1.0 || std::fabs(x) <= half_width(); }
  /// Indicator I_{S(q)}(x).
  double indicator(double x) const { return contains(x) ? 1.0 : 0.0; }
  /// Point at the given signed fraction of the half-width.
  double at_fraction(double f) const { return f * half_width(); }
};

/// q-Hermite H_n: H_{n+1} = x H_n - [n]_q H_{n-1}, H_{-1} = 0, H_0 = 1.
template <RingScalar S>
S hermite_q(long n, const S& x, const S& q, long degree_cap = kDefaultDegreeCap) {
  detail::check_degree(n, degree_cap);
  S prev(0), cur(1), bracket(0);
  for (long k = 0; k < n; ++k) {
    S next = x * cur - bracket * prev;
    prev = cur;
    cur = next;
    bracket = bracket * q + S(1);  // [k+1]_q
  }
  return cur;
}

/// Continuous q-Hermite h_n: h_{n+1} = 2x h_n - (1-q^n) h_{n-1}.
template <RingScalar S>
S hermite_cq(long n, const S& x, const S& q, long degree_cap = kDefaultDegreeCap) {
  detail::check_degree(n, degree_cap);
  S prev(0), cur(1), qn(1);
  for (long k = 0; k < n; ++k) {
    S next = S(2) * x * cur - (S(1) - qn) * prev;
    prev = cur;
    cur = next;
    qn = qn * q;
  }
  return cur;
}

/// h_n(x sqrt(1-q)/2 | q) / (1-q)^{n/2}; equals H_n(x|q) for |q| < 1.
double rescale_h_to_H(long n, double x, double q, long degree_cap = kDefaultDegreeCap);

/// Big q-Hermite H_n(x|a,q): H_{n+1} = (x - a q^n) H_n - [n]_q H_{n-1}.
template <RingScalar S>
S big_hermite_q(long n, const S& x, const S& a, const S& q, long degree_cap = kDefaultDegreeCap) {
  detail::check_degree(n, degree_cap);
  S prev(0), cur(1), bracket(0), qn(1);
  for (long k = 0; k < n; ++k) {
    S next = (x - a * qn) * cur - bracket * prev;
    prev = cur;
    cur = next;
    bracket = bracket * q + S(1);
    qn = qn * q;
  }
  return cur;
}

/// Al-Salam--Chihara A_n(x|a,b,q):
/// A_{n+1} = (2x - (a+b) q^n) A_n - (1 - a b q^{n-1})(1 - q^n) A_{n-1}.
/// Favard positivity requires |ab| <= 1.
template <RingScalar S>
S asc(long n, const S& x, const S& a, const S& b, const S& q, long degree_cap = kDefaultDegreeCap) {
  detail::check_degree(n, degree_cap);
  if (detail::approx_abs(a * b) > 1.0 + 1e-15)
    throw DomainError("Al-Salam-Chihara requires |ab| <= 1");
  S prev(0), cur(1), qn(1), qn1(0);  // qn = q^k, qn1 = q^{k-1} (0 placeholder at k=0)
  for (long k = 0; k < n; ++k) {
    S next = (S(2) * x - (a + b) * qn) * cur - (S(1) - a * b * qn1) * (S(1) - qn) * prev;
    prev = cur;
    cur = next;
    qn1 = qn;
    qn = qn * q;
  }
  return cur;
}

/// Rescaled Al-Salam--Chihara P_n(x|y,rho,q):
/// P_{n+1} = (x - rho y q^n) P_n - [n]_q (1 - rho^2 q^{n-1}) P_{n-1}; needs |rho| < 1.
template <RingScalar S>
S asc_p(long n, const S& x, const S& y, const S& rho, const S& q,
        long degree_cap = kDefaultDegreeCap) {
  detail::check_degree(n, degree_cap);
  if (detail::approx_abs(rho) >= 1.0) throw DomainError("asc_p requires |rho| < 1");
  S prev(0), cur(1), bracket(0), qn(1), qn1(0);
  for (long k = 0; k < n; ++k) {
    S next = (x - rho * y * qn) * cur - bracket * (S(1) - rho * rho * qn1) * prev;
    prev = cur;
    cur = next;
    bracket = bracket * q + S(1);
    qn1 = qn;
    qn = qn * q;
  }
  return cur;
}

/// Chebyshev U_n of the second kind with the extended conventions
/// U_{-1} = 0, U_{-2} = -1 used by the rho/q=0 reductions.
template <RingScalar S>
S chebyshev_u(long n, const S& x) {
  if (n == -2) return S(-1);
  if (n == -1) return S(0);
  if (n < -2) throw DomainError("chebyshev_u defined for n >= -2");
  S prev(0), cur(1);
  for (long k = 0; k < n; ++k) {
    S next = S(2) * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Exact coefficient-form constructions (the authority when parameters are rational).

/// H_n(x|q) as an exact polynomial in x.
Poly1 hermite_q_coeffs(long n, const ExactScalar& q);

/// h_n(x|q) as an exact polynomial in x.
Poly1 hermite_cq_coeffs(long n, const ExactScalar& q);

/// H_n(x|a,q) built by the three-term recurrence (oracle for bqh_expansion).
Poly1 big_hermite_q_coeffs(long n, const ExactScalar& a, const ExactScalar& q);

/// H_n(x|a,q) = sum_k [n k]_q (-a)^k q^C(k,2) H_{n-k}(x|q), as an exact polynomial.
Poly1 bqh_expansion(long n, const ExactScalar& a, const ExactScalar& q);

/// P_n(x|y,rho,q) as an exact polynomial in x for fixed rational y, rho, q.
Poly1 asc_p_coeffs(long n, const ExactScalar& y, const ExactScalar& rho, const ExactScalar& q);

/// The five scalar families behind the CLI "eval" targets.
enum class Family { qH, cqH, bqH, ASC, P };

struct FamilySpec {
  Family family = Family::qH;
  double q = 0.0;
  double a = 0.0;    // bqH shift / ASC first parameter
  double b = 0.0;    // ASC second parameter
  double y = 0.0;    // P conditioning variable
  double rho = 0.0;  // P correlation

  void validate() const;
};

double evaluate(const FamilySpec& spec, long n, double x, long degree_cap = kDefaultDegreeCap);

namespace detail {
/// h_0..h_{count-1} at a fixed point; bounded-amplitude form used by the
/// series engines (no degree cap: forward recurrence is stable inside S(q)).
std::vector<double> hermite_cq_all(long count, double x, double q);
/// Classical probabilistic Hermite He_0..He_{count-1} (the q = 1 limit family).
std::vector<double> hermite_prob_all(long count, double x);
}  // namespace detail

}  // namespace qmehler
