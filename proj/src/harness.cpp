#include "qmehler/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <thread>

#include "qmehler/bivariate.hpp"
#include "qmehler/quadrature.hpp"

namespace qmehler {

namespace {

struct CheckSpec {
  const char* name;
  const char* mode;  // "exact" | "residual"
  double default_tolerance;
  std::function<void(const CheckConfig&, CheckResult&)> run;
};

TruncationPolicy policy_of(const CheckConfig& cfg) {
  TruncationPolicy policy;
  policy.tol = cfg.trunc_tol;
  policy.max_terms = cfg.max_terms;
  return policy;
}

std::vector<double> interior_points(double q, int count, double fraction = 0.95) {
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

// the rational (rho, q) pairs every exact identity is certified at
const std::vector<std::pair<ExactScalar, ExactScalar>>& exact_pairs() {
  static const std::vector<std::pair<ExactScalar, ExactScalar>> pairs = {
      {ExactScalar(1, 3), ExactScalar(1, 2)},
      {ExactScalar(1, 4), ExactScalar(2, 3)},
      {ExactScalar(1, 5), ExactScalar(3, 4)},
      {ExactScalar(1, 3), ExactScalar(-1, 2)},
      {ExactScalar(2, 5), ExactScalar(1, 5)},
  };
  return pairs;
}

nlohmann::json exact_pairs_json() {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [rho, q] : exact_pairs())
    arr.push_back({{"rho", rational_to_string(rho)}, {"q", rational_to_string(q)}});
  return arr;
}

// ---- residual checks ----

void check_pm(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  double worst = 0.0;
  for (double q : cfg.q_grid)
    for (double rho : cfg.rho_grid) {
      auto pts = interior_points(q, cfg.xy_points);
      for (double x : pts)
        for (double y : pts) {
          KernelParams p{x, y, rho, q};
          worst = std::max(worst, std::fabs(gamma_series(0, 0, p, policy) - pm_product(p, policy)));
        }
    }
  out.residual = worst;
  out.params = {{"q", cfg.q_grid}, {"rho", cfg.rho_grid}, {"xy_points", cfg.xy_points}};
}

void check_upm(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  const long max_level = 5;
  double worst = 0.0;
  for (double q : cfg.q_grid)
    for (double rho : cfg.rho_grid)
      for (long i = 0; i <= max_level; ++i)
        for (long j = 0; i + j <= max_level; ++j) {
          auto rep = verify_upm(i, j, rho, q, out.tolerance, policy, cfg.xy_points);
          worst = std::max(worst, rep.max_residual);
        }
  out.residual = worst;
  out.params = {{"q", cfg.q_grid}, {"rho", cfg.rho_grid}, {"max_level", max_level}};
}

void check_lemma_basic(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  double worst = 0.0;
  long count = 0;
  const double ts[2] = {0.3, -0.4};
  for (double q : cfg.q_grid)
    for (double t : ts) {
      if (!((1.0 - q) * t * t < 1.0)) continue;
      long n = count % 6;
      double x = SupportInterval(q).at_fraction(count % 2 == 0 ? 0.45 : -0.6);
      worst = std::max(worst, std::fabs(eta_n(n, x, t, q, policy) - eta_n_product(n, x, t, q, policy)));
      ++count;
    }
  out.residual = worst;
  out.params = {{"q", cfg.q_grid}, {"t", {ts[0], ts[1]}}, {"points", count}};
}

// Batched quadrature state shared by the two Proposition-style integral checks.
struct Fch1Batch {
  std::vector<double> xs, ws;
  // value grid for each (i,j), i+j <= level_cap, plus the density grid
  std::map<std::pair<long, long>, std::vector<double>> qvals;
  std::vector<double> f2d;
  long level_cap;
  int n_nodes;

  Fch1Batch(double rho, double q, long cap, int nodes, const TruncationPolicy& policy)
      : level_cap(cap), n_nodes(nodes) {
    SupportGrid g = support_nodes(q, nodes);
    xs = g.x;
    ws = g.w;
    f2d.resize(xs.size() * xs.size());
    for (std::size_t a = 0; a < xs.size(); ++a)
      for (std::size_t b = 0; b < xs.size(); ++b)
        f2d[a * xs.size() + b] = f_2D(xs[a], xs[b], rho, q, policy);
    for (long d = 0; d <= cap; ++d)
      for (long i = 0; i <= d; ++i) qvals[{i, d - i}] = {};
    for (auto& [key, grid] : qvals) grid.resize(xs.size() * xs.size());
    for (std::size_t a = 0; a < xs.size(); ++a)
      for (std::size_t b = 0; b < xs.size(); ++b) {
        std::vector<double> vals = q_poly_values_upto(cap, xs[a], xs[b], rho, q);
        std::size_t flat = 0;
        for (long d = 0; d <= cap; ++d)
          for (long i = 0; i <= d; ++i) qvals[{i, d - i}][a * xs.size() + b] = vals[flat++];
      }
  }

  double inner(const std::pair<long, long>& p1, const std::pair<long, long>& p2) const {
    const auto& g1 = qvals.at(p1);
    const auto& g2 = qvals.at(p2);
    double acc = 0.0;
    for (std::size_t a = 0; a < xs.size(); ++a) {
      double row = 0.0;
      for (std::size_t b = 0; b < xs.size(); ++b) {
        std::size_t idx = a * xs.size() + b;
        row += ws[b] * g1[idx] * g2[idx] * f2d[idx];
      }
      acc += ws[a] * row;
    }
    return acc;
  }
};

const std::vector<std::pair<double, double>>& fch_param_pairs() {
  static const std::vector<std::pair<double, double>> pairs = {
      {0.4, 0.5}, {0.6, 0.3}, {0.3, -0.5}, {0.5, 0.9}};
  return pairs;
}

void check_fch_i_cross(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  const long cap = 6;
  double worst = 0.0;
  for (const auto& [rho, q] : fch_param_pairs()) {
    Fch1Batch batch(rho, q, cap, 320, policy);
    // sanity anchor: the (0,0)x(0,0) integral is the f_2D mass
    double mass = batch.inner({0, 0}, {0, 0});
    if (std::fabs(mass - 1.0) > 1e-8)
      throw NumericalError("f_2D mass deviates from 1 by " + std::to_string(mass - 1.0));
    for (long d1 = 0; d1 <= cap; ++d1)
      for (long d2 = d1 + 1; d2 <= cap; ++d2)
        for (long i = 0; i <= d1; ++i)
          for (long m = 0; m <= d2; ++m)
            worst = std::max(worst, std::fabs(batch.inner({i, d1 - i}, {m, d2 - m})));
  }
  out.residual = worst;
  out.params = {{"level_cap", cap}, {"pairs", {{0.4, 0.5}, {0.6, 0.3}, {0.3, -0.5}, {0.5, 0.9}}}};
}

void check_fch_i_gram(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  const long cap = 4;
  double worst = 0.0;
  for (const auto& [rho, q] : fch_param_pairs()) {
    Fch1Batch batch(rho, q, cap, 320, policy);
    for (long n = 0; n <= cap; ++n)
      for (long j = 0; j <= n; ++j)
        for (long k = j; k <= n; ++k) {
          double quad = batch.inner({n - j, j}, {n - k, k});
          double closed = gram_entry<double>(n, j, k, rho, q);
          worst = std::max(worst, std::fabs(quad - closed));
        }
  }
  out.residual = worst;
  out.params = {{"level_cap", cap}, {"pairs", {{0.4, 0.5}, {0.6, 0.3}, {0.3, -0.5}, {0.5, 0.9}}}};
}

void check_fch_ii(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  struct Pt {
    double s, t, xf, yf, rho, q;
  };
  static const Pt pts[10] = {
      {0.20, 0.25, 0.30, -0.40, 0.40, 0.50}, {0.15, -0.20, 0.50, 0.20, 0.30, 0.30},
      {-0.25, 0.20, -0.35, 0.55, 0.50, 0.00}, {0.10, 0.30, 0.25, -0.60, 0.20, -0.50},
      {0.30, 0.10, -0.50, -0.30, 0.60, 0.40}, {0.20, 0.20, 0.40, 0.40, 0.40, 0.70},
      {-0.15, -0.25, 0.60, -0.20, 0.30, 0.50}, {0.25, 0.15, -0.25, 0.35, 0.50, 0.30},
      {0.10, -0.10, 0.45, 0.65, 0.20, 0.60}, {0.30, 0.30, -0.40, 0.25, 0.40, -0.30}};
  double worst = 0.0;
  for (const Pt& p : pts) {
    SupportInterval s(p.q);
    KernelParams params{s.at_fraction(p.xf), s.at_fraction(p.yf), p.rho, p.q};
    auto rep = q_generating_function_check(p.s, p.t, params, policy, out.tolerance);
    worst = std::max(worst, rep.max_residual);
  }
  out.residual = worst;
  out.params = {{"points", 10}};
}

void check_main_i(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  double worst = 0.0;
  for (double q : cfg.q_grid)
    for (double rho : cfg.rho_grid) {
      auto pts = interior_points(q, cfg.xy_points);
      for (long i = 0; i <= 2; ++i)
        for (double x : pts)
          for (double y : pts)
            worst = std::max(worst, theorem_main_residual(i, i, KernelParams{x, y, rho, q}, policy));
    }
  out.residual = worst;
  out.params = {{"q", cfg.q_grid}, {"rho", cfg.rho_grid}, {"i_max", 2}};
}

void check_recip(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  double worst = 0.0;
  for (double q : cfg.q_grid)
    for (double rho : cfg.rho_grid) {
      auto pts = interior_points(q, cfg.xy_points);
      for (double x : pts)
        for (double y : pts) {
          KernelParams p{x, y, rho, q};
          double product = reciprocal_series_adaptive(x, y, rho, q, policy) * gamma_series(0, 0, p, policy);
          worst = std::max(worst, std::fabs(product - 1.0));
        }
    }
  out.residual = worst;
  out.params = {{"q", cfg.q_grid}, {"rho", cfg.rho_grid}};
}

void check_lnsk(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  // q = 0.9 is paired only with small rho: the alternating series passes
  // through large intermediate terms before q^C(k,2) decay wins, which
  // amplifies roundoff beyond the target at rho >= 0.4.
  std::vector<std::pair<double, double>> params;
  for (double q : cfg.q_grid)
    for (double rho : cfg.rho_grid)
      if (q < 0.9 || rho <= 0.2) params.emplace_back(rho, q);
  static const std::pair<long, long> indices[3] = {{0, 0}, {1, 2}, {2, 1}};
  double worst = 0.0;
  for (const auto& [rho, q] : params) {
    auto pts = interior_points(q, 3);
    for (const auto& [i, j] : indices)
      for (double x : pts)
        for (double y : pts) {
          KernelParams p{x, y, rho, q};
          double lhs = hermite_product_series(i, j, p, policy);
          double rhs = hermite_q(i, x, q) * hermite_q(j, y, q);
          worst = std::max(worst, std::fabs(lhs - rhs));
        }
  }
  out.residual = worst;
  out.params = {{"q", cfg.q_grid}, {"rho", cfg.rho_grid}, {"restriction", "q=0.9 only with rho<=0.2"}};
}

void check_ort(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  static const double qs[4] = {-0.5, 0.0, 0.3, 0.7};
  const long nmax = 8;
  const int nodes = 512;
  double worst = 0.0;
  for (double q : qs) {
    SupportGrid g = support_nodes(q, nodes);
    std::vector<std::vector<double>> h(g.x.size());
    std::vector<double> w(g.x.size());
    for (std::size_t a = 0; a < g.x.size(); ++a) {
      std::vector<double> vals(static_cast<std::size_t>(nmax) + 1);
      double prev = 0.0, cur = 1.0, bracket = 0.0;
      for (long n = 0; n <= nmax; ++n) {
        vals[static_cast<std::size_t>(n)] = cur;
        double next = g.x[a] * cur - bracket * prev;
        prev = cur;
        cur = next;
        bracket = bracket * q + 1.0;
      }
      h[a] = std::move(vals);
      w[a] = g.w[a] * f_N(g.x[a], q, policy);
    }
    for (long n = 0; n <= nmax; ++n)
      for (long m = n; m <= nmax; ++m) {
        double acc = 0.0;
        for (std::size_t a = 0; a < g.x.size(); ++a)
          acc += w[a] * h[a][static_cast<std::size_t>(n)] * h[a][static_cast<std::size_t>(m)];
        double expected = (n == m) ? to_double(q_factorial<double>(n, q)) : 0.0;
        worst = std::max(worst, std::fabs(acc - expected));
      }
  }
  out.residual = worst;
  out.params = {{"q", {qs[0], qs[1], qs[2], qs[3]}}, {"n_max", nmax}, {"nodes", nodes}};
}

void check_pkw(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  const long nmax = 6;
  const int nodes = 512;
  double worst = 0.0;
  for (double q : cfg.q_grid)
    for (double rho : cfg.rho_grid)
      for (double yf : {0.4, -0.3}) {
        double y = SupportInterval(q).at_fraction(yf);
        SupportGrid g = support_nodes(q, nodes);
        std::vector<std::vector<double>> pv(g.x.size());
        std::vector<double> w(g.x.size());
        for (std::size_t a = 0; a < g.x.size(); ++a) {
          std::vector<double> vals(static_cast<std::size_t>(nmax) + 1);
          double prev = 0.0, cur = 1.0, bracket = 0.0, qn = 1.0, qn1 = 0.0;
          for (long n = 0; n <= nmax; ++n) {
            vals[static_cast<std::size_t>(n)] = cur;
            double next = (g.x[a] - rho * y * qn) * cur - bracket * (1.0 - rho * rho * qn1) * prev;
            prev = cur;
            cur = next;
            bracket = bracket * q + 1.0;
            qn1 = qn;
            qn *= q;
          }
          pv[a] = std::move(vals);
          w[a] = g.w[a] * f_CN(g.x[a], y, rho, q, policy);
        }
        for (long n = 0; n <= nmax; ++n)
          for (long m = n; m <= nmax; ++m) {
            double acc = 0.0;
            for (std::size_t a = 0; a < g.x.size(); ++a)
              acc += w[a] * pv[a][static_cast<std::size_t>(n)] * pv[a][static_cast<std::size_t>(m)];
            double expected = (n == m) ? to_double(q_factorial<double>(n, q)) *
                                             q_pochhammer<double>(rho * rho, q, n)
                                       : 0.0;
            worst = std::max(worst, std::fabs(acc - expected));
          }
      }
  out.residual = worst;
  out.params = {{"q", cfg.q_grid}, {"rho", cfg.rho_grid}, {"n_max", nmax}, {"y_fractions", {0.4, -0.3}}};
}

void check_zb1(const CheckConfig& cfg, CheckResult& out) {
  TruncationPolicy policy = policy_of(cfg);
  static const double qs[3] = {0.9, 0.99, 0.999};
  std::vector<double> devs;
  for (double q : qs) {
    double worst = 0.0;
    for (int k = 0; k <= 12; ++k) {
      double x = -3.0 + 0.5 * k;
      double normal = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
      worst = std::max(worst, std::fabs(f_N(x, q, policy) - normal));
    }
    devs.push_back(worst);
  }
  bool monotone = devs[0] > devs[1] && devs[1] > devs[2];
  out.residual = devs.back();
  out.pass = monotone && devs.back() < out.tolerance;
  out.params = {{"q", {qs[0], qs[1], qs[2]}}, {"deviations", devs}};
}

// ---- exact checks ----

void check_qnaq(const CheckConfig&, CheckResult& out) {
  bool ok = true;
  for (const auto& [rho, q] : exact_pairs())
    for (long i = 0; i <= 2 && ok; ++i)
      for (long j = 0; i + j <= 4 && ok; ++j)
        for (long m = 0; m <= 4 && ok; ++m) ok = q_shift_identity(i, j, m, rho, q);
  out.exact_pass = ok;
  out.params = {{"pairs", exact_pairs_json()}, {"i_max", 2}, {"level_max", 4}, {"m_max", 4}};
}

void check_il(const CheckConfig&, CheckResult& out) {
  bool ok = true;
  for (const auto& [rho, q] : exact_pairs())
    for (long n = 0; n <= 4 && ok; ++n) ok = omega_product_identity(n, rho, q);
  out.exact_pass = ok;
  out.params = {{"pairs", exact_pairs_json()}, {"n_max", 4}};
}

void check_qkk(const CheckConfig&, CheckResult& out) {
  bool ok = true;
  for (const auto& [rho, q] : exact_pairs())
    for (long n = 0; n <= 4 && ok; ++n) ok = qkk_inversion(n, rho, q);
  out.exact_pass = ok;
  out.params = {{"pairs", exact_pairs_json()}, {"n_max", 4}};
}

void check_pomoc(const CheckConfig&, CheckResult& out) {
  bool ok = true;
  for (const auto& [rho, q] : exact_pairs())
    for (long i = 0; i <= 2 && ok; ++i)
      for (long j = 0; j <= 2 && ok; ++j)
        for (long m = 0; m <= 3 && ok; ++m) ok = pomoc_exact(i, j, m, 8, rho, q);
  out.exact_pass = ok;
  out.params = {{"pairs", exact_pairs_json()}, {"i_max", 2}, {"m_max", 3}, {"order", 8}};
}

const std::vector<CheckSpec>& registry() {
  static const std::vector<CheckSpec> specs = {
      {"PM", "residual", 1e-8, check_pm},
      {"uPM", "residual", 1e-7, check_upm},
      {"lemma-basic", "residual", 1e-9, check_lemma_basic},
      {"fch-i-cross", "residual", 1e-6, check_fch_i_cross},
      {"fch-i-gram", "residual", 1e-6, check_fch_i_gram},
      {"fch-ii", "residual", 1e-7, check_fch_ii},
      {"QnaQ", "exact", 0.0, check_qnaq},
      {"il", "exact", 0.0, check_il},
      {"qkk", "exact", 0.0, check_qkk},
      {"main-i", "residual", 1e-7, check_main_i},
      {"recip", "residual", 1e-7, check_recip},
      {"lnsk", "residual", 1e-7, check_lnsk},
      {"pomoc", "exact", 0.0, check_pomoc},
      {"ort", "residual", 1e-7, check_ort},
      {"pkw", "residual", 1e-7, check_pkw},
      {"zb1-limit", "residual", 1e-2, check_zb1},
  };
  return specs;
}

CheckResult run_one(const CheckSpec& spec, const CheckConfig& cfg) {
  CheckResult result;
  result.name = spec.name;
  result.mode = spec.mode;
  result.tolerance = cfg.tolerance_override && std::string(spec.mode) == "residual"
                         ? *cfg.tolerance_override
                         : spec.default_tolerance;
  auto start = std::chrono::steady_clock::now();
  try {
    spec.run(cfg, result);
    if (result.residual.has_value() && result.name != "zb1-limit")
      result.pass = *result.residual < result.tolerance;
    else if (result.exact_pass.has_value())
      result.pass = *result.exact_pass;
    // zb1-limit sets pass itself (monotonicity plus loose bound)
  } catch (const std::exception& e) {
    result.error = e.what();
    result.pass = false;
  }
  auto end = std::chrono::steady_clock::now();
  result.runtime_ms = std::chrono::duration<double, std::milli>(end - start).count();
  return result;
}

int resolve_threads(const CheckConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("QMEHLER_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& spec : registry()) out.emplace_back(spec.name);
    return out;
  }();
  return names;
}

Report run_suite(const std::vector<std::string>& selection, const CheckConfig& config) {
  std::vector<const CheckSpec*> chosen;
  bool all = selection.size() == 1 && selection[0] == "all";
  if (all) {
    for (const auto& spec : registry()) chosen.push_back(&spec);
  } else {
    for (const auto& name : selection) {
      const CheckSpec* found = nullptr;
      for (const auto& spec : registry())
        if (name == spec.name) found = &spec;
      if (!found) throw UnknownCheckError("unknown check '" + name + "'");
      chosen.push_back(found);
    }
  }

  Report report;
  report.suite = all ? "all" : [&] {
    std::string s;
    for (std::size_t i = 0; i < selection.size(); ++i) s += (i ? "," : "") + selection[i];
    return s;
  }();
  report.config = config;
  report.checks.resize(chosen.size());

  int threads = std::min<int>(resolve_threads(config), static_cast<int>(chosen.size()));
  threads = std::max(threads, 1);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t k = next.fetch_add(1);
      if (k >= chosen.size()) break;
      report.checks[k] = run_one(*chosen[k], config);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  report.pass = true;
  for (const auto& check : report.checks) report.pass = report.pass && check.pass;
  return report;
}

nlohmann::json CheckConfig::to_json() const {
  return {{"q_grid", q_grid},
          {"rho_grid", rho_grid},
          {"xy_points", xy_points},
          {"trunc_tol", trunc_tol},
          {"max_terms", max_terms},
          {"tolerance_override",
           tolerance_override ? nlohmann::json(*tolerance_override) : nlohmann::json(nullptr)},
          {"threads", threads}};
}

nlohmann::json CheckResult::to_json(bool include_runtime) const {
  return {{"name", name},
          {"mode", mode},
          {"params", params},
          {"residual", residual ? nlohmann::json(*residual) : nlohmann::json(nullptr)},
          {"exact_pass", exact_pass ? nlohmann::json(*exact_pass) : nlohmann::json(nullptr)},
          {"tolerance", tolerance},
          {"pass", pass},
          {"runtime_ms", include_runtime ? runtime_ms : 0.0},
          {"error", error ? nlohmann::json(*error) : nlohmann::json(nullptr)}};
}

nlohmann::json Report::to_json(bool include_runtime) const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& check : checks) checks_json.push_back(check.to_json(include_runtime));
  return {{"suite", suite}, {"config", config.to_json()}, {"checks", checks_json}, {"pass", pass}};
}

}  // namespace qmehler
