#include "qmehler/kernels.hpp"

#include <cmath>
#include <numbers>

#include "qmehler/detail/series.hpp"

namespace qmehler {

using detail::HeRoll;
using detail::HRoll;
using detail::scaled_abscissa;
using detail::StableSum;

namespace {

constexpr double kPi = std::numbers::pi;

void require_inside_support(double x, double q, const char* what) {
  if (!SupportInterval(q).contains(x))
    throw DomainError(std::string(what) + " requires the argument to lie in S(q)");
}

}  // namespace

TruncatedValue log_v_product(double xhat, double t0, double q, const TruncationPolicy& policy) {
  policy.validate();
  require_q_inside_unit(q);
  TruncatedValue out;
  if (t0 == 0.0) return out;
  const double ratio_gap = 1.0 - std::fabs(q);
  double t = t0;
  double acc = 0.0;
  for (long j = 0; j < policy.max_terms; ++j) {
    double v = v_poly(xhat, t);
    if (!(v > 0.0)) throw DomainError("v-product factor vanished (x at support endpoint)");
    acc += std::log(v);
    t *= q;
    ++out.terms;
    if (std::fabs(t) < 0.01) {
      double tail = 8.0 * std::fabs(t) / ratio_gap;
      if (tail < policy.tol) {
        out.value = acc;
        out.tail_bound = tail;
        return out;
      }
    }
  }
  out.value = acc;
  out.tail_bound = 8.0 * std::fabs(t) / ratio_gap;
  return out;
}

TruncatedValue log_cn_ratio(double xhat, double yhat, double rho, double q,
                            const TruncationPolicy& policy) {
  policy.validate();
  require_q_inside_unit(q);
  if (!(std::fabs(rho) < 1.0)) throw DomainError("Poisson-Mehler kernel requires |rho| < 1");
  TruncatedValue out;
  if (rho == 0.0) return out;
  const double ratio_gap = 1.0 - std::fabs(q);
  double r = rho;  // rho q^j
  double acc = 0.0;
  for (long j = 0; j < policy.max_terms; ++j) {
    double w = omega_poly(xhat, yhat, r);
    if (!(w > 0.0)) throw DomainError("omega factor vanished (corner of S(q)^2 with |rho| -> 1)");
    acc += std::log1p(-rho * r) - std::log(w);  // rho^2 q^j = rho * r
    r *= q;
    ++out.terms;
    if (std::fabs(r) < 0.01) {
      double tail = 14.0 * std::fabs(r) / ratio_gap;
      if (tail < policy.tol) {
        out.value = acc;
        out.tail_bound = tail;
        return out;
      }
    }
  }
  out.value = acc;
  out.tail_bound = 14.0 * std::fabs(r) / ratio_gap;
  return out;
}

double log_phi_H(double x, double rho, double q, const TruncationPolicy& policy) {
  if (!(std::fabs(rho * (1.0 - q)) < 1.0)) throw DomainError("phi_H requires |rho(1-q)| < 1");
  require_q_inside_unit(q);
  require_inside_support(x, q, "phi_H");
  double s = std::sqrt(1.0 - q);
  return -log_v_product(scaled_abscissa(x, q), rho * s, q, policy).value;
}

double phi_H(double x, double rho, double q, const TruncationPolicy& policy) {
  return std::exp(log_phi_H(x, rho, q, policy));
}

double phi_H_series(double x, double rho, double q, const TruncationPolicy& policy) {
  policy.validate();
  require_q_param(q);
  if (q == 1.0) {  // classical Hermite generating function branch
    StableSum sum(policy);
    HeRoll he(x);
    double coef = 1.0;  // rho^j / j!
    for (long j = 0; j < policy.max_terms && !sum.converged(); ++j) {
      sum.add(coef * he.cur);
      he.step();
      coef *= rho / static_cast<double>(j + 1);
    }
    return sum.value();
  }
  require_inside_support(x, q, "phi_H_series");
  const double z = rho * std::sqrt(1.0 - q);
  StableSum sum(policy);
  HRoll h(scaled_abscissa(x, q), q);
  double zn = 1.0, qpoch = 1.0, qj = q;
  for (long j = 0; j < policy.max_terms && !sum.converged(); ++j) {
    sum.add(zn * h.cur / qpoch);
    h.step();
    zn *= z;
    qpoch *= 1.0 - qj;
    qj *= q;
  }
  return sum.value();
}

double phi_P(double x, double y, double rho, double t, double q, const TruncationPolicy& policy) {
  double s = std::sqrt(1.0 - q);
  if (!(std::fabs(t * s) < 1.0)) throw DomainError("phi_P requires |t sqrt(1-q)| < 1");
  if (!(std::fabs(rho) < 1.0)) throw DomainError("phi_P requires |rho| < 1");
  require_q_inside_unit(q);
  require_inside_support(x, q, "phi_P");
  require_inside_support(y, q, "phi_P");
  double num = log_v_product(scaled_abscissa(y, q), rho * t * s, q, policy).value;
  double den = log_v_product(scaled_abscissa(x, q), t * s, q, policy).value;
  return std::exp(num - den);
}

double phi_P_series(double x, double y, double rho, double t, double q,
                    const TruncationPolicy& policy) {
  policy.validate();
  require_q_inside_unit(q);
  if (!(std::fabs(rho) < 1.0)) throw DomainError("phi_P_series requires |rho| < 1");
  const double s = std::sqrt(1.0 - q);
  const double z = t * s;
  // P-hat recurrence: Phat_{n+1} = (2 xhat - 2 rho yhat q^n) Phat_n
  //                                - (1-q^n)(1 - rho^2 q^{n-1}) Phat_{n-1}
  const double xhat = scaled_abscissa(x, q), yhat = scaled_abscissa(y, q);
  StableSum sum(policy);
  double prev = 0.0, cur = 1.0, qn = 1.0, qn1 = 0.0;
  double zn = 1.0, qpoch = 1.0, qj = q;
  for (long n = 0; n < policy.max_terms && !sum.converged(); ++n) {
    sum.add(zn * cur / qpoch);
    double next = (2.0 * xhat - 2.0 * rho * yhat * qn) * cur - (1.0 - qn) * (1.0 - rho * rho * qn1) * prev;
    prev = cur;
    cur = next;
    qn1 = qn;
    qn *= q;
    zn *= z;
    qpoch *= 1.0 - qj;
    qj *= q;
  }
  return sum.value();
}

double eta_n(long n, double x, double t, double q, const TruncationPolicy& policy) {
  policy.validate();
  require_q_param(q);
  if (!((1.0 - q) * t * t < 1.0)) throw DomainError("eta_n requires (1-q) t^2 < 1");
  if (q == 1.0) {
    StableSum sum(policy);
    HeRoll he(x);
    he.advance(n);
    double coef = 1.0;  // t^j / j!
    for (long j = 0; j < policy.max_terms && !sum.converged(); ++j) {
      sum.add(coef * he.cur);
      he.step();
      coef *= t / static_cast<double>(j + 1);
    }
    return sum.value();
  }
  require_inside_support(x, q, "eta_n");
  const double z = t * std::sqrt(1.0 - q);
  StableSum sum(policy);
  HRoll h(scaled_abscissa(x, q), q);
  h.advance(n);
  double zj = 1.0, qpoch = 1.0, qj = q;
  for (long j = 0; j < policy.max_terms && !sum.converged(); ++j) {
    sum.add(zj * h.cur / qpoch);
    h.step();
    zj *= z;
    qpoch *= 1.0 - qj;
    qj *= q;
  }
  return sum.value() / std::pow(1.0 - q, 0.5 * n);
}

double eta_n_product(long n, double x, double t, double q, const TruncationPolicy& policy) {
  return big_hermite_q(n, x, t, q) * phi_H(x, t, q, policy);
}

double log_f_N(double x, double q, const TruncationPolicy& policy) {
  policy.validate();
  require_q_inside_unit(q);
  double radicand = (1.0 - q) * (4.0 - (1.0 - q) * x * x);
  if (!(radicand > 0.0)) return -std::numeric_limits<double>::infinity();
  const double xhat = scaled_abscissa(x, q);
  const double ratio_gap = 1.0 - std::fabs(q);
  double acc = 0.5 * std::log(radicand) - std::log(2.0 * kPi);
  double qj = q;  // q^j from j = 1
  for (long j = 1; j < policy.max_terms; ++j) {
    acc += std::log1p(-qj) + std::log(l_poly(xhat, qj));
    qj *= q;
    if (std::fabs(qj) < 0.01 && 16.0 * std::fabs(qj) / ratio_gap < policy.tol) break;
  }
  return acc;
}

double f_N(double x, double q, const TruncationPolicy& policy) {
  return std::exp(log_f_N(x, q, policy));
}

double f_bN(double x, double a, double q, const TruncationPolicy& policy) {
  if (!(std::fabs(a * (1.0 - q)) < 1.0)) throw DomainError("f_bN requires |a(1-q)| < 1");
  require_q_inside_unit(q);
  if (!SupportInterval(q).contains(x)) return 0.0;
  double lf = log_f_N(x, q, policy);
  if (lf == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::exp(lf + log_phi_H(x, a, q, policy));
}

double log_f_CN(double x, double y, double rho, double q, const TruncationPolicy& policy) {
  KernelParams{x, y, rho, q}.validate_products();
  require_inside_support(y, q, "f_CN (conditioning variable)");
  double lf = log_f_N(x, q, policy);
  if (lf == -std::numeric_limits<double>::infinity()) return lf;
  return lf + log_cn_ratio(scaled_abscissa(x, q), scaled_abscissa(y, q), rho, q, policy).value;
}

double f_CN(double x, double y, double rho, double q, const TruncationPolicy& policy) {
  if (!SupportInterval(q).contains(x)) return 0.0;
  return std::exp(log_f_CN(x, y, rho, q, policy));
}

double log_f_2D(double x, double y, double rho, double q, const TruncationPolicy& policy) {
  KernelParams{x, y, rho, q}.validate_products();
  SupportInterval s(q);
  if (!s.contains(x) || !s.contains(y)) return -std::numeric_limits<double>::infinity();
  double ly = log_f_N(y, q, policy);
  if (ly == -std::numeric_limits<double>::infinity()) return ly;
  double lx = log_f_CN(x, y, rho, q, policy);
  return lx + ly;
}

double f_2D(double x, double y, double rho, double q, const TruncationPolicy& policy) {
  return std::exp(log_f_2D(x, y, rho, q, policy));
}

}  // namespace qmehler
