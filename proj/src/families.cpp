#include "qmehler/families.hpp"

namespace qmehler {

double rescale_h_to_H(long n, double x, double q, long degree_cap) {
  if (q == 1.0) throw DomainError("rescale_h_to_H is undefined at q = 1");
  require_q_param(q);
  double xr = x * std::sqrt(1.0 - q) / 2.0;
  return hermite_cq(n, xr, q, degree_cap) / std::pow(1.0 - q, 0.5 * n);
}

Poly1 hermite_q_coeffs(long n, const ExactScalar& q) {
  detail::check_degree(n, std::numeric_limits<long>::max());
  Poly1 prev, cur(ExactScalar(1));
  Poly1 x = Poly1::x();
  ExactScalar bracket(0);
  for (long k = 0; k < n; ++k) {
    Poly1 next = x * cur - bracket * prev;
    prev = cur;
    cur = next;
    bracket = bracket * q + ExactScalar(1);
  }
  return cur;
}

Poly1 hermite_cq_coeffs(long n, const ExactScalar& q) {
  detail::check_degree(n, std::numeric_limits<long>::max());
  Poly1 prev, cur(ExactScalar(1));
  Poly1 two_x = Poly1::monomial(1, ExactScalar(2));
  ExactScalar qn(1);
  for (long k = 0; k < n; ++k) {
    Poly1 next = two_x * cur - (ExactScalar(1) - qn) * prev;
    prev = cur;
    cur = next;
    qn = qn * q;
  }
  return cur;
}

Poly1 big_hermite_q_coeffs(long n, const ExactScalar& a, const ExactScalar& q) {
  detail::check_degree(n, std::numeric_limits<long>::max());
  Poly1 prev, cur(ExactScalar(1));
  ExactScalar bracket(0), qn(1);
  for (long k = 0; k < n; ++k) {
    Poly1 shift = Poly1::x() - Poly1(a * qn);
    Poly1 next = shift * cur - bracket * prev;
    prev = cur;
    cur = next;
    bracket = bracket * q + ExactScalar(1);
    qn = qn * q;
  }
  return cur;
}

Poly1 bqh_expansion(long n, const ExactScalar& a, const ExactScalar& q) {
  detail::check_degree(n, std::numeric_limits<long>::max());
  Poly1 acc;
  for (long k = 0; k <= n; ++k) {
    ExactScalar c = q_binomial(n, k, q) * int_pow(ExactScalar(-a), k) * int_pow(q, choose2(k));
    acc = acc + c * hermite_q_coeffs(n - k, q);
  }
  return acc;
}

Poly1 asc_p_coeffs(long n, const ExactScalar& y, const ExactScalar& rho, const ExactScalar& q) {
  detail::check_degree(n, std::numeric_limits<long>::max());
  if (detail::approx_abs(rho) >= 1.0) throw DomainError("asc_p requires |rho| < 1");
  Poly1 prev, cur(ExactScalar(1));
  ExactScalar bracket(0), qn(1), qn1(0);
  for (long k = 0; k < n; ++k) {
    Poly1 shift = Poly1::x() - Poly1(rho * y * qn);
    Poly1 next = shift * cur - bracket * (ExactScalar(1) - rho * rho * qn1) * prev;
    prev = cur;
    cur = next;
    bracket = bracket * q + ExactScalar(1);
    qn1 = qn;
    qn = qn * q;
  }
  return cur;
}

void FamilySpec::validate() const {
  require_q_param(q);
  switch (family) {
    case Family::ASC:
      if (std::fabs(a * b) > 1.0) throw DomainError("ASC requires |ab| <= 1");
      break;
    case Family::P:
      if (std::fabs(rho) >= 1.0) throw DomainError("P requires |rho| < 1");
      break;
    default:
      break;
  }
}

double evaluate(const FamilySpec& spec, long n, double x, long degree_cap) {
  spec.validate();
  switch (spec.family) {
    case Family::qH:
      return hermite_q(n, x, spec.q, degree_cap);
    case Family::cqH:
      return hermite_cq(n, x, spec.q, degree_cap);
    case Family::bqH:
      return big_hermite_q(n, x, spec.a, spec.q, degree_cap);
    case Family::ASC:
      return asc(n, x, spec.a, spec.b, spec.q, degree_cap);
    case Family::P:
      return asc_p(n, x, spec.y, spec.rho, spec.q, degree_cap);
  }
  throw DomainError("unknown family");
}

namespace detail {

std::vector<double> hermite_cq_all(long count, double x, double q) {
  std::vector<double> h(static_cast<std::size_t>(std::max<long>(count, 0)));
  if (count <= 0) return h;
  h[0] = 1.0;
  double qn = 1.0;
  for (long k = 0; k + 1 < count; ++k) {
    double prev = (k == 0) ? 0.0 : h[static_cast<std::size_t>(k - 1)];
    h[static_cast<std::size_t>(k + 1)] = 2.0 * x * h[static_cast<std::size_t>(k)] - (1.0 - qn) * prev;
    qn *= q;
  }
  return h;
}

std::vector<double> hermite_prob_all(long count, double x) {
  std::vector<double> h(static_cast<std::size_t>(std::max<long>(count, 0)));
  if (count <= 0) return h;
  h[0] = 1.0;
  for (long k = 0; k + 1 < count; ++k) {
    double prev = (k == 0) ? 0.0 : h[static_cast<std::size_t>(k - 1)];
    h[static_cast<std::size_t>(k + 1)] = x * h[static_cast<std::size_t>(k)] - static_cast<double>(k) * prev;
  }
  return h;
}

}  // namespace detail

}  // namespace qmehler
