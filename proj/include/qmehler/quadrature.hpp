#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qmehler/errors.hpp"
#include "qmehler/truncation.hpp"

namespace qmehler {

/// Gauss-Legendre nodes/weights on [-1, 1]; cached per node count.
struct GaussLegendreRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussLegendreRule& gauss_legendre(int n);

enum class QuadTransform {
  direct,  // plain Gauss-Legendre on [-L, L]
  trig,    // x = (2/sqrt(1-q)) cos(theta): absorbs the endpoint square root
};

struct QuadratureRule {
  int nodes = 128;
  QuadTransform transform = QuadTransform::trig;
  double target_error = 1e-9;
  int max_nodes = 1024;

  void validate() const {
    if (nodes < 2) throw std::invalid_argument("QuadratureRule: nodes must be >= 2");
    if (!(target_error > 0.0)) throw std::invalid_argument("QuadratureRule: target_error must be > 0");
  }
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |value(n) - value(2n)| at the accepted refinement
  int nodes_used = 0;           // per axis
};

/// Quadrature points on S(q) with weights that already include the Jacobian
/// of the chosen transform, so sum_i w_i f(x_i) approximates the integral.
struct SupportGrid {
  std::vector<double> x;
  std::vector<double> w;
};
SupportGrid support_nodes(double q, int n, QuadTransform transform = QuadTransform::trig);

/// Integrates f over S(q), doubling the node count until the refinement delta
/// meets rule.target_error; throws ConvergenceError if it stalls above target.
QuadResult integrate_1d(const std::function<double(double)>& f, double q,
                        const QuadratureRule& rule = {});

/// Tensor-product integral of f over S(q) x S(q) with the same refinement loop.
QuadResult integrate_2d(const std::function<double(double, double)>& f, double q,
                        const QuadratureRule& rule = {});

}  // namespace qmehler
