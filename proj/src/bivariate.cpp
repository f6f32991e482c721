#include "qmehler/bivariate.hpp"

#include <cmath>

#include "json.hpp"
#include "qmehler/detail/series.hpp"

namespace qmehler {

using detail::HeRoll;
using detail::HRoll;
using detail::scaled_abscissa;
using detail::StableSum;

namespace {

void require_indices(long i, long j) {
  if (i < 0 || j < 0) throw DomainError("polynomial indices must be nonnegative");
}

void require_support_pair(double x, double y, double q, const char* what) {
  SupportInterval s(q);
  if (!s.contains(x) || !s.contains(y))
    throw DomainError(std::string(what) + " requires x, y in S(q)");
}

// Incremental evaluator of Q_{i,j}(x,y|rho,q) through the Al-Salam-Chihara
// expansion; grows its P_n(x|y), H_n(y) and (rho^2)_n tables on demand so a
// whole series of Q values shares one set of recurrences. Works at q = 1 too
// (every ingredient is a plain three-term recurrence there).
class QValueEngine {
 public:
  QValueEngine(double x, double y, double rho, double q) : x_(x), y_(y), rho_(rho), q_(q) {
    if (!(std::fabs(rho) < 1.0)) throw DomainError("Q_{i,j} requires |rho| < 1");
    require_q_param(q);
    p_ = {1.0};
    hy_ = {1.0};
    poch_ = {1.0};
  }

  double value(long i, long j) {
    require_indices(i, j);
    ensure_p(i + j);
    ensure_hy(j);
    double acc = 0.0;
    double coef = 1.0;  // (-1)^s q^C(s,2) rho^s, stepped by -rho q^s
    double qs = 1.0;
    for (long s = 0; s <= j; ++s) {
      acc += coef * q_binomial<double>(j, s, q_) * hy_[static_cast<std::size_t>(j - s)] *
             p_[static_cast<std::size_t>(i + s)] / poch_[static_cast<std::size_t>(i + s)];
      coef *= -rho_ * qs;
      qs *= q_;
    }
    return acc;
  }

 private:
  void ensure_p(long n) {
    while (static_cast<long>(p_.size()) <= n) {
      long k = static_cast<long>(p_.size()) - 1;  // have P_0..P_k
      double prev = (k == 0) ? 0.0 : p_[static_cast<std::size_t>(k - 1)];
      double next = (x_ - rho_ * y_ * qn_p_) * p_.back() -
                    bracket_p_ * (1.0 - rho_ * rho_ * qn1_p_) * prev;
      p_.push_back(next);
      qn1_p_ = qn_p_;
      qn_p_ *= q_;
      bracket_p_ = bracket_p_ * q_ + 1.0;
    }
    while (static_cast<long>(poch_.size()) <= n) {
      poch_.push_back(poch_.back() * (1.0 - rho_ * rho_ * qn_poch_));
      qn_poch_ *= q_;
    }
  }

  void ensure_hy(long n) {
    while (static_cast<long>(hy_.size()) <= n) {
      long k = static_cast<long>(hy_.size()) - 1;
      double prev = (k == 0) ? 0.0 : hy_[static_cast<std::size_t>(k - 1)];
      hy_.push_back(y_ * hy_.back() - bracket_h_ * prev);
      bracket_h_ = bracket_h_ * q_ + 1.0;
    }
  }

  double x_, y_, rho_, q_;
  std::vector<double> p_, hy_, poch_;
  double bracket_p_ = 0.0, qn_p_ = 1.0, qn1_p_ = 0.0;
  double bracket_h_ = 0.0;
  double qn_poch_ = 1.0;
};

std::vector<double> interior_grid(double q, int count, double fraction = 0.95) {
  SupportInterval s(q);
  double half = s.half_width() * fraction;
  std::vector<double> pts(static_cast<std::size_t>(count));
  if (count == 1) {
    pts[0] = 0.0;
    return pts;
  }
  for (int k = 0; k < count; ++k)
    pts[static_cast<std::size_t>(k)] = -half + 2.0 * half * k / (count - 1);
  return pts;
}

}  // namespace

double gamma_series(long i, long j, const KernelParams& p, const TruncationPolicy& policy) {
  policy.validate();
  p.validate();
  require_indices(i, j);
  if (p.q == 1.0) {
    StableSum sum(policy);
    HeRoll hx(p.x), hy(p.y);
    hx.advance(i);
    hy.advance(j);
    double coef = 1.0;  // rho^n / n!
    for (long n = 0; n < policy.max_terms && !sum.converged(); ++n) {
      sum.add(coef * hx.cur * hy.cur);
      hx.step();
      hy.step();
      coef *= p.rho / static_cast<double>(n + 1);
    }
    return sum.value();
  }
  require_support_pair(p.x, p.y, p.q, "gamma series");
  const double pref = std::pow(1.0 - p.q, -0.5 * static_cast<double>(i + j));
  StableSum sum(policy);
  HRoll hx(scaled_abscissa(p.x, p.q), p.q), hy(scaled_abscissa(p.y, p.q), p.q);
  hx.advance(i);
  hy.advance(j);
  double rn = 1.0, qpoch = 1.0, qj = p.q;  // rho^n and (q)_n
  for (long n = 0; n < policy.max_terms && !sum.converged(); ++n) {
    sum.add(pref * rn * hx.cur * hy.cur / qpoch);
    hx.step();
    hy.step();
    rn *= p.rho;
    qpoch *= 1.0 - qj;
    qj *= p.q;
  }
  return sum.value();
}

double pm_product(const KernelParams& p, const TruncationPolicy& policy) {
  p.validate_products();
  require_support_pair(p.x, p.y, p.q, "Poisson-Mehler product");
  return std::exp(
      log_cn_ratio(scaled_abscissa(p.x, p.q), scaled_abscissa(p.y, p.q), p.rho, p.q, policy).value);
}

Poly2 omega_scaled_poly2(const ExactScalar& t, const ExactScalar& q) {
  require_q_param(q);
  ExactScalar t2 = t * t;
  ExactScalar one_minus = ExactScalar(1) - t2;
  ExactScalar scale = ExactScalar(1) - q;  // (sqrt(1-q)/2)^2 * 4 = 1-q
  Poly2 out(one_minus * one_minus);
  out = out + Poly2::monomial(1, 1, -t * (ExactScalar(1) + t2) * scale);
  out = out + Poly2::monomial(2, 0, t2 * scale) + Poly2::monomial(0, 2, t2 * scale);
  return out;
}

Poly2 asc_p_poly2(long n, const ExactScalar& rho, const ExactScalar& q) {
  require_indices(n, 0);
  Poly2 prev, cur(ExactScalar(1));
  ExactScalar bracket(0), qn(1), qn1(0);
  for (long k = 0; k < n; ++k) {
    Poly2 shift = Poly2::x() + Poly2::monomial(0, 1, -rho * qn);
    Poly2 next = shift * cur - (bracket * (ExactScalar(1) - rho * rho * qn1)) * prev;
    prev = cur;
    cur = next;
    bracket = bracket * q + ExactScalar(1);
    qn1 = qn;
    qn = qn * q;
  }
  return cur;
}

Poly2 q_poly(long i, long j, const ExactScalar& rho, const ExactScalar& q) {
  require_indices(i, j);
  require_q_param(q);
  if (!(rho * rho < 1)) throw DomainError("Q_{i,j} requires |rho| < 1");

  std::vector<Poly2> p(static_cast<std::size_t>(i + j) + 1);
  {
    Poly2 prev, cur(ExactScalar(1));
    ExactScalar bracket(0), qn(1), qn1(0);
    p[0] = cur;
    for (long k = 0; k < i + j; ++k) {
      Poly2 shift = Poly2::x() + Poly2::monomial(0, 1, -rho * qn);
      Poly2 next = shift * cur - (bracket * (ExactScalar(1) - rho * rho * qn1)) * prev;
      prev = cur;
      cur = next;
      bracket = bracket * q + ExactScalar(1);
      qn1 = qn;
      qn = qn * q;
      p[static_cast<std::size_t>(k + 1)] = cur;
    }
  }

  Poly2 acc;
  for (long s = 0; s <= j; ++s) {
    ExactScalar poch = q_pochhammer(rho * rho, q, i + s);
    if (poch == 0) throw DomainError("(rho^2)_{i+s} vanished");
    ExactScalar c = int_pow(ExactScalar(-1), s) * int_pow(q, choose2(s)) * q_binomial(j, s, q) *
                    int_pow(rho, s) / poch;
    Poly2 hy = Poly2::from_poly_in_y(hermite_q_coeffs(j - s, q));
    acc = acc + c * (hy * p[static_cast<std::size_t>(i + s)]);
  }
  return acc;
}

double q_poly_value(long i, long j, double x, double y, double rho, double q) {
  QValueEngine engine(x, y, rho, q);
  return engine.value(i, j);
}

std::vector<double> q_poly_values_upto(long level_cap, double x, double y, double rho, double q) {
  if (level_cap < 0) throw DomainError("level_cap must be nonnegative");
  QValueEngine engine(x, y, rho, q);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>((level_cap + 1) * (level_cap + 2) / 2));
  for (long d = 0; d <= level_cap; ++d)
    for (long i = 0; i <= d; ++i) out.push_back(engine.value(i, d - i));
  return out;
}

double q_poly_value_q1(long i, long j, double x, double y, double rho) {
  require_indices(i, j);
  if (!(std::fabs(rho) < 1.0)) throw DomainError("Q_{i,j} requires |rho| < 1");
  const double root = std::sqrt(1.0 - rho * rho);
  const double u = (x - rho * y) / root;
  std::vector<double> hey = detail::hermite_prob_all(j + 1, y);
  std::vector<double> heu = detail::hermite_prob_all(i + j + 1, u);
  double acc = 0.0;
  for (long k = 0; k <= j; ++k) {
    double c = (k % 2 == 0 ? 1.0 : -1.0) * to_double(binomial<ExactScalar>(j, k)) *
               std::pow(rho, static_cast<double>(k));
    acc += c * hey[static_cast<std::size_t>(j - k)] * heu[static_cast<std::size_t>(k + i)] /
           std::pow(root, static_cast<double>(k + i));
  }
  return acc;
}

QPolyTable::QPolyTable(ExactScalar rho, ExactScalar q, long max_total_degree)
    : rho_(std::move(rho)), q_(std::move(q)), max_degree_(max_total_degree) {
  if (max_degree_ < 0) throw DomainError("QPolyTable requires a nonnegative degree bound");
  for (long d = 0; d <= max_degree_; ++d)
    for (long i = 0; i <= d; ++i) table_.emplace(std::make_pair(i, d - i), q_poly(i, d - i, rho_, q_));
}

const Poly2& QPolyTable::at(long i, long j) const {
  auto it = table_.find({i, j});
  if (it == table_.end()) throw std::out_of_range("QPolyTable: index beyond table degree");
  return it->second;
}

std::string QPolyTable::to_json() const {
  nlohmann::json polys = nlohmann::json::array();
  for (const auto& [key, poly] : table_) {
    polys.push_back({{"i", key.first},
                     {"j", key.second},
                     {"poly", nlohmann::json::parse(poly2_to_json(poly))}});
  }
  nlohmann::json doc{{"rho", rational_to_string(rho_)},
                     {"q", rational_to_string(q_)},
                     {"max_total_degree", max_degree_},
                     {"polys", polys}};
  return doc.dump(2);
}

ResidualReport verify_upm(long i, long j, double rho, double q, double tolerance,
                          const TruncationPolicy& policy, int grid_per_axis) {
  ResidualReport report;
  report.tolerance = tolerance;
  std::vector<double> pts = interior_grid(q, grid_per_axis);
  for (double x : pts) {
    for (double y : pts) {
      KernelParams p{x, y, rho, q};
      double lhs = gamma_series(i, j, p, policy);
      double rhs = q_poly_value(i, j, x, y, rho, q) * gamma_series(0, 0, p, policy);
      report.max_residual = std::max(report.max_residual, std::fabs(lhs - rhs));
      ++report.points;
    }
  }
  report.pass = report.max_residual < tolerance;
  return report;
}

ResidualReport shifted_rho_identity(long n, long m,
                                    const std::function<double(long, double)>& sigma, double rho,
                                    double q, double tolerance) {
  if (m < 0) throw DomainError("shifted_rho_identity requires m >= 0");
  require_q_param(q);
  double lhs = sigma(n, rho * std::pow(q, static_cast<double>(m)));
  double rhs = 0.0;
  for (long k = 0; k <= m; ++k) {
    double c = (k % 2 == 0 ? 1.0 : -1.0) * q_binomial<double>(m, k, q) *
               std::pow(q, static_cast<double>(choose2(k))) *
               std::pow((1.0 - q) * rho, static_cast<double>(k));
    rhs += c * sigma(n + k, rho);
  }
  ResidualReport report;
  report.tolerance = tolerance;
  report.max_residual = std::fabs(lhs - rhs);
  report.points = 1;
  report.pass = report.max_residual < tolerance;
  return report;
}

bool pomoc_exact(long i, long j, long m, long order, const ExactScalar& rho, const ExactScalar& q) {
  require_indices(i, j);
  if (m < 0 || order < m) throw DomainError("pomoc_exact requires order >= m >= 0");
  require_q_param(q);

  const long top = i + j + 2 * (m + order) + 2;
  std::vector<Poly2> hx, hy;
  for (long t = 0; t <= top; ++t) {
    hx.push_back(Poly2::from_poly_in_x(hermite_q_coeffs(t, q)));
    hy.push_back(Poly2::from_poly_in_y(hermite_q_coeffs(t, q)));
  }

  // truncated sigma_k(r) = sum_{t<=T} r^t/[t]_q! H_{t+i+k}(x) H_{t+j+k}(y)
  auto sigma = [&](long k, const ExactScalar& r, long terms) {
    Poly2 acc;
    ExactScalar rt(1), fact(1), bracket(0);
    for (long t = 0; t <= terms; ++t) {
      acc = acc + (rt / fact) * (hx[static_cast<std::size_t>(t + i + k)] *
                                 hy[static_cast<std::size_t>(t + j + k)]);
      rt = rt * r;
      bracket = bracket * q + ExactScalar(1);
      fact = fact * bracket;
    }
    return acc;
  };

  Poly2 lhs = sigma(0, rho * int_pow(q, m), order);
  Poly2 rhs;
  for (long k = 0; k <= m; ++k) {
    ExactScalar c = int_pow(ExactScalar(-1), k) * q_binomial(m, k, q) * int_pow(q, choose2(k)) *
                    int_pow((ExactScalar(1) - q) * rho, k);
    rhs = rhs + c * sigma(k, rho, order - k);
  }
  return lhs == rhs;
}

double hermite_product_series(long i, long j, const KernelParams& p,
                              const TruncationPolicy& policy) {
  p.validate_products();
  require_indices(i, j);
  StableSum sum(policy);
  double c = 1.0;  // (-1)^k q^C(k,2) rho^k / (q)_k
  double qk = 1.0, qk1 = p.q;
  for (long k = 0; k < policy.max_terms && !sum.converged(); ++k) {
    sum.add(c * gamma_series(i + k, j + k, p, policy));
    c *= -p.rho * qk / (1.0 - qk1);
    qk *= p.q;
    qk1 *= p.q;
  }
  return sum.value();
}

namespace {

// shared assembler for the three exact omega identities
Poly2 qnaq_rhs(long i, long j, long m, const ExactScalar& rho, const ExactScalar& q) {
  Poly2 rhs;
  for (long k = 0; k <= m; ++k) {
    ExactScalar c = int_pow(ExactScalar(-1), k) * q_binomial(m, k, q) * int_pow(q, choose2(k)) *
                    int_pow((ExactScalar(1) - q) * rho, k);
    rhs = rhs + c * q_poly(i + k, j + k, rho, q);
  }
  return q_pochhammer(rho * rho, q, 2 * m) * rhs;
}

std::string first_diff(const Poly2& a, const Poly2& b) {
  long nx = std::max(a.x_degree(), b.x_degree());
  long ny = std::max(a.y_degree(), b.y_degree());
  for (long i = 0; i <= nx; ++i)
    for (long j = 0; j <= ny; ++j)
      if (!(a.coeff(i, j) == b.coeff(i, j)))
        return "coefficient of x^" + std::to_string(i) + " y^" + std::to_string(j) +
               " differs: " + rational_to_string(a.coeff(i, j)) + " vs " +
               rational_to_string(b.coeff(i, j));
  return "";
}

}  // namespace

bool q_shift_identity(long i, long j, long m, const ExactScalar& rho, const ExactScalar& q,
                      std::string* diff) {
  require_indices(i, j);
  if (m < 0) throw DomainError("q_shift_identity requires m >= 0");
  Poly2 lhs = q_poly(i, j, rho * int_pow(q, m), q);
  ExactScalar t = rho;
  for (long s = 0; s < m; ++s) {
    lhs = lhs * omega_scaled_poly2(t, q);
    t = t * q;
  }
  Poly2 rhs = qnaq_rhs(i, j, m, rho, q);
  if (lhs == rhs) return true;
  if (diff) *diff = first_diff(lhs, rhs);
  return false;
}

bool omega_product_identity(long n, const ExactScalar& rho, const ExactScalar& q,
                            std::string* diff) {
  if (n < 0) throw DomainError("omega_product_identity requires n >= 0");
  Poly2 lhs(ExactScalar(1));
  ExactScalar t = rho;
  for (long s = 0; s < n; ++s) {
    lhs = lhs * omega_scaled_poly2(t, q);
    t = t * q;
  }
  Poly2 rhs = qnaq_rhs(0, 0, n, rho, q);
  if (lhs == rhs) return true;
  if (diff) *diff = first_diff(lhs, rhs);
  return false;
}

bool qkk_inversion(long n, const ExactScalar& rho, const ExactScalar& q, std::string* diff) {
  if (n < 0) throw DomainError("qkk_inversion requires n >= 0");
  if (rho == 0) throw DomainError("qkk_inversion degenerates at rho = 0");
  Poly2 lhs = (int_pow(q, choose2(n)) * int_pow(rho, n) * int_pow(ExactScalar(1) - q, n)) *
              q_poly(n, n, rho, q);
  Poly2 rhs;
  Poly2 omega_prod(ExactScalar(1));
  ExactScalar t = rho;
  for (long k = 0; k <= n; ++k) {
    ExactScalar c = int_pow(ExactScalar(-1), k) * int_pow(q, choose2(n - k)) * q_binomial(n, k, q) /
                    q_pochhammer(rho * rho, q, 2 * k);
    rhs = rhs + c * omega_prod;
    omega_prod = omega_prod * omega_scaled_poly2(t, q);
    t = t * q;
  }
  if (lhs == rhs) return true;
  if (diff) *diff = first_diff(lhs, rhs);
  return false;
}

GramMatrix gram_matrix(long n, double rho, double q) {
  if (n < 0) throw DomainError("gram_matrix requires n >= 0");
  GramMatrix g;
  g.level = n;
  g.entries = Eigen::MatrixXd(n + 1, n + 1);
  for (long j = 0; j <= n; ++j)
    for (long k = j; k <= n; ++k) {
      double value = gram_entry<double>(n, j, k, rho, q);
      g.entries(j, k) = value;
      g.entries(k, j) = value;
    }
  return g;
}

Eigen::MatrixXd gram_schmidt_basis(const GramMatrix& gram) {
  const long d = gram.level + 1;
  Eigen::LLT<Eigen::MatrixXd> llt(gram.entries);
  if (llt.info() != Eigen::Success)
    throw NumericalError("Gram matrix is not numerically positive definite (rho near 1?)");
  Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd basis = llt.matrixL().solve(identity);
  return basis;
}

Eigen::MatrixXd gram_schmidt_basis(long n, double rho, double q) {
  return gram_schmidt_basis(gram_matrix(n, rho, q));
}

ResidualReport q_generating_function_check(double s, double t, const KernelParams& p,
                                           const TruncationPolicy& policy, double tolerance) {
  p.validate_products();
  require_support_pair(p.x, p.y, p.q, "generating-function check");
  const double root = std::sqrt(1.0 - p.q);
  if (!(std::fabs(t * root) < 1.0 && std::fabs(s * root) < 1.0))
    throw DomainError("generating-function check requires |t sqrt(1-q)|, |s sqrt(1-q)| < 1");

  // left side: blocks of total degree d of sum t^n s^m/([n]_q![m]_q!) Q_{n,m}
  QValueEngine engine(p.x, p.y, p.rho, p.q);
  StableSum lhs_sum(policy);
  std::vector<double> tw = {1.0}, sw = {1.0};  // t^n/[n]_q!, s^m/[m]_q!
  double bracket = 0.0;                        // [k]_q rolled as bracket*q + 1
  for (long d = 0; d <= policy.max_terms && !lhs_sum.converged(); ++d) {
    while (static_cast<long>(tw.size()) <= d) {
      bracket = bracket * p.q + 1.0;
      tw.push_back(tw.back() * t / bracket);
      sw.push_back(sw.back() * s / bracket);
    }
    double block = 0.0;
    for (long n = 0; n <= d; ++n)
      block += tw[static_cast<std::size_t>(n)] * sw[static_cast<std::size_t>(d - n)] *
               engine.value(n, d - n);
    lhs_sum.add(block);
  }

  // right side: density ratio times the big q-Hermite bilinear series
  double log_ratio = log_f_N(p.x, p.q, policy) + log_phi_H(p.x, t, p.q, policy) +
                     log_f_N(p.y, p.q, policy) + log_phi_H(p.y, s, p.q, policy) -
                     log_f_2D(p.x, p.y, p.rho, p.q, policy);
  double ratio = std::exp(log_ratio);

  StableSum series(policy);
  const double xh = scaled_abscissa(p.x, p.q), yh = scaled_abscissa(p.y, p.q);
  const double th = scaled_abscissa(t, p.q), sh = scaled_abscissa(s, p.q);
  double px = 0.0, cx = 1.0, py = 0.0, cy = 1.0;  // hat-normalized bqH rolls
  double qk = 1.0, qpoch = 1.0, qj = p.q, rk = 1.0;
  for (long k = 0; k < policy.max_terms && !series.converged(); ++k) {
    series.add(rk * cx * cy / qpoch);
    double nx = (2.0 * xh - 2.0 * th * qk) * cx - (1.0 - qk) * px;
    double ny = (2.0 * yh - 2.0 * sh * qk) * cy - (1.0 - qk) * py;
    px = cx;
    cx = nx;
    py = cy;
    cy = ny;
    qk *= p.q;
    rk *= p.rho;
    qpoch *= 1.0 - qj;
    qj *= p.q;
  }

  ResidualReport report;
  report.tolerance = tolerance;
  report.max_residual = std::fabs(lhs_sum.value() - ratio * series.value());
  report.points = 1;
  report.pass = report.max_residual < tolerance;
  return report;
}

namespace {

// sum_k (-1)^k q^C(k,2) rho^k/[k]_q! Q_{i+k,j+k} with either a fixed number of
// terms (n_terms >= 0) or adaptive stopping (n_terms < 0).
double alternating_q_series(long i, long j, double x, double y, double rho, double q,
                            long n_terms, const TruncationPolicy& policy) {
  if (q == 1.0 && !(std::fabs(rho) < 0.5))
    throw DomainError("the q = 1 branch requires |rho| < 1/2");
  QValueEngine engine(x, y, rho, q);
  StableSum sum(policy);
  double c = 1.0;  // (-1)^k q^C(k,2) rho^k / [k]_q!
  double qk = 1.0, bracket = 0.0;
  long limit = (n_terms >= 0) ? n_terms : policy.max_terms - 1;
  for (long k = 0; k <= limit; ++k) {
    sum.add(c * engine.value(i + k, j + k));
    if (n_terms < 0 && sum.converged()) break;
    bracket = bracket * q + 1.0;  // [k+1]_q
    c *= -rho * qk / bracket;
    qk *= q;
  }
  return sum.value();
}

}  // namespace

double reciprocal_series(double x, double y, double rho, double q, long n_terms) {
  if (n_terms < 0) throw DomainError("reciprocal_series requires a nonnegative term count");
  require_q_param(q);
  if (q != 1.0) require_support_pair(x, y, q, "reciprocal_series");
  TruncationPolicy policy;
  return alternating_q_series(0, 0, x, y, rho, q, n_terms, policy);
}

double reciprocal_series_adaptive(double x, double y, double rho, double q,
                                  const TruncationPolicy& policy) {
  policy.validate();
  require_q_param(q);
  if (q != 1.0) require_support_pair(x, y, q, "reciprocal_series");
  return alternating_q_series(0, 0, x, y, rho, q, -1, policy);
}

double theorem_main_residual(long i, long j, const KernelParams& p,
                             const TruncationPolicy& policy) {
  p.validate_products();
  require_support_pair(p.x, p.y, p.q, "theorem_main_residual");
  double lhs = hermite_q(i, p.x, p.q) * hermite_q(j, p.y, p.q) /
               pm_product(p, policy);  // H_i H_j prod(omega)/(rho^2)_inf
  double rhs = alternating_q_series(i, j, p.x, p.y, p.rho, p.q, -1, policy);
  return std::fabs(lhs - rhs);
}

}  // namespace qmehler
