#include "qmehler/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "qmehler/qarith.hpp"

namespace qmehler {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Legendre
// recurrence, weights 2 * (first eigenvector component)^2.
GaussLegendreRule compute_gauss_legendre(int n) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k - 1, k) = b;
    jac(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
  if (solver.info() != Eigen::Success)
    throw NumericalError("Gauss-Legendre eigen decomposition failed");
  GaussLegendreRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = solver.eigenvalues()(i);
    double v0 = solver.eigenvectors()(0, i);
    rule.w[i] = 2.0 * v0 * v0;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

SupportGrid support_nodes(double q, int n, QuadTransform transform) {
  require_q_inside_unit(q);
  const GaussLegendreRule& gl = gauss_legendre(n);
  const double half = 2.0 / std::sqrt(1.0 - q);
  SupportGrid grid;
  grid.x.resize(gl.x.size());
  grid.w.resize(gl.w.size());
  if (transform == QuadTransform::direct) {
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      grid.x[i] = half * gl.x[i];
      grid.w[i] = half * gl.w[i];
    }
  } else {
    // theta in [0, pi], x = half*cos(theta), dx = -half*sin(theta) dtheta
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      double theta = 0.5 * pi * (gl.x[i] + 1.0);
      grid.x[i] = half * std::cos(theta);
      grid.w[i] = 0.5 * pi * gl.w[i] * half * std::sin(theta);
    }
  }
  return grid;
}

namespace {

double eval_1d(const std::function<double(double)>& f, double q, int n, QuadTransform t) {
  SupportGrid g = support_nodes(q, n, t);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f(g.x[i]);
  return acc;
}

double eval_2d(const std::function<double(double, double)>& f, double q, int n, QuadTransform t) {
  SupportGrid g = support_nodes(q, n, t);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < g.x.size(); ++j) row += g.w[j] * f(g.x[i], g.x[j]);
    acc += g.w[i] * row;
  }
  return acc;
}

template <class Eval>
QuadResult refine(Eval eval, const QuadratureRule& rule) {
  rule.validate();
  int n = rule.nodes;
  double coarse = eval(n);
  while (true) {
    int n2 = 2 * n;
    double fine = eval(n2);
    double err = std::fabs(fine - coarse);
    if (err <= rule.target_error) return {fine, err, n2};
    if (n2 >= rule.max_nodes)
      throw ConvergenceError("quadrature refinement stalled above target error (delta = " +
                             std::to_string(err) + ")");
    coarse = fine;
    n = n2;
  }
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double q,
                        const QuadratureRule& rule) {
  return refine([&](int n) { return eval_1d(f, q, n, rule.transform); }, rule);
}

QuadResult integrate_2d(const std::function<double(double, double)>& f, double q,
                        const QuadratureRule& rule) {
  return refine([&](int n) { return eval_2d(f, q, n, rule.transform); }, rule);
}

}  // namespace qmehler
