// qmehler: evaluate q-Hermite-type families, Poisson-Mehler kernels and
// densities on grids, build exact Q-polynomial tables, compute Gram matrices
// and orthonormal bases, and run the identity-verification suites.
//
// Exit status: 0 = success / all checks pass, 1 = a verification check
// failed, 2 = usage or validation error (machine-readable JSON on stderr).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmehler/bivariate.hpp"
#include "qmehler/harness.hpp"
#include "qmehler/kernels.hpp"
#include "qmehler/quadrature.hpp"

namespace {

using namespace qmehler;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_number(const std::string& text) {
  if (text.find('/') != std::string::npos) return to_double(rational_from_string(text));
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw DomainError("bad numeric literal '" + text + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw DomainError("bad numeric literal '" + text + "'");
  }
}

struct Options {
  std::string target, suite, grid, format = "csv", out;
  std::optional<std::string> q, rho, x, y, t, s, a, b;
  std::optional<long> n, m, i, j;
  double trunc_tol = 1e-12;
  long max_terms = 100000;
  std::optional<double> tol_override;
  int threads = 0;
  bool exact = false;
  bool allow_endpoints = false;
  bool basis = false;
  bool no_runtime = false;
  long max_degree = 4;
};

double need_number(const std::optional<std::string>& v, const char* flag) {
  if (!v) throw DomainError(std::string("missing required flag ") + flag);
  return parse_number(*v);
}
ExactScalar need_rational(const std::optional<std::string>& v, const char* flag) {
  if (!v) throw DomainError(std::string("missing required flag ") + flag);
  return rational_from_string(*v);
}
long need_index(const std::optional<long>& v, const char* flag) {
  if (!v) throw DomainError(std::string("missing required flag ") + flag);
  if (*v < 0) throw DomainError(std::string(flag) + " must be nonnegative");
  return *v;
}

struct AxisGrid {
  std::vector<std::string> literals;  // original token per point (exact mode)
  std::vector<double> values;
};

AxisGrid parse_axis(const std::string& spec) {
  // "x0:x1:count"
  AxisGrid grid;
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() != 3) throw DomainError("grid axis must be 'x0:x1:count', got '" + spec + "'");
  long count = std::stol(parts[2]);
  if (count < 1) throw DomainError("grid count must be >= 1");
  double x0 = parse_number(parts[0]), x1 = parse_number(parts[1]);
  for (long k = 0; k < count; ++k) {
    double v = (count == 1) ? x0 : x0 + (x1 - x0) * static_cast<double>(k) / (count - 1);
    grid.values.push_back(v);
    grid.literals.push_back(format_double(v));
  }
  return grid;
}

// Clips grid values into 99.9% of the S(q) half-width (density/product targets).
void clip_to_support(AxisGrid& grid, double q, bool allow_endpoints) {
  if (allow_endpoints || q == 1.0) return;
  double limit = SupportInterval(q).half_width() * 0.999;
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    if (grid.values[k] > limit) grid.values[k] = limit;
    if (grid.values[k] < -limit) grid.values[k] = -limit;
    grid.literals[k] = format_double(grid.values[k]);
  }
}

void write_output(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(out);
  if (!file) throw DomainError("cannot open output file '" + out + "'");
  file << text;
}

int cmd_eval(const Options& opt) {
  static const std::set<std::string> targets = {"H",   "h",   "bqH", "ASC",   "P",
                                                "phiH", "phiP", "eta", "fN",    "fbN",
                                                "fCN",  "f2D",  "gamma", "Q",   "omega",
                                                "recip-series"};
  if (!targets.count(opt.target)) throw DomainError("unknown eval target '" + opt.target + "'");
  const bool two_var = opt.target == "f2D" || opt.target == "gamma" || opt.target == "Q" ||
                       opt.target == "omega" || opt.target == "recip-series";
  const bool needs_support_clip = opt.target == "phiH" || opt.target == "phiP" ||
                                  opt.target == "eta" || opt.target == "fN" ||
                                  opt.target == "fbN" || opt.target == "fCN" ||
                                  opt.target == "f2D" || opt.target == "gamma" ||
                                  opt.target == "recip-series";

  TruncationPolicy policy{opt.trunc_tol, opt.max_terms, false};

  AxisGrid xg, yg;
  if (!opt.grid.empty()) {
    std::stringstream ss(opt.grid);
    std::string ax;
    std::vector<std::string> axes;
    while (std::getline(ss, ax, ',')) axes.push_back(ax);
    if (axes.empty() || axes.size() > 2) throw DomainError("grid must have one or two axes");
    xg = parse_axis(axes[0]);
    if (axes.size() == 2) yg = parse_axis(axes[1]);
  }
  if (xg.values.empty()) {
    if (!opt.x) throw DomainError("provide --x or --grid");
    xg.values.push_back(parse_number(*opt.x));
    xg.literals.push_back(*opt.x);
  }
  if (two_var && yg.values.empty()) {
    if (!opt.y) throw DomainError("target needs --y or a second grid axis");
    yg.values.push_back(parse_number(*opt.y));
    yg.literals.push_back(*opt.y);
  }
  if (!two_var) {
    yg.values = {0.0};
    yg.literals = {""};
  }

  double q = opt.q ? parse_number(*opt.q) : 0.0;
  if (needs_support_clip) {
    clip_to_support(xg, q, opt.allow_endpoints);
    if (two_var) clip_to_support(yg, q, opt.allow_endpoints);
  }

  // exact-mode evaluation for the polynomial targets
  auto exact_value = [&](const std::string& xs, const std::string& ys) -> std::string {
    ExactScalar x = rational_from_string(xs);
    if (opt.target == "H")
      return rational_to_string(hermite_q_coeffs(need_index(opt.n, "--n"), need_rational(opt.q, "--q")).eval(x));
    if (opt.target == "h")
      return rational_to_string(hermite_cq_coeffs(need_index(opt.n, "--n"), need_rational(opt.q, "--q")).eval(x));
    if (opt.target == "bqH")
      return rational_to_string(
          big_hermite_q_coeffs(need_index(opt.n, "--n"), need_rational(opt.a, "--a"), need_rational(opt.q, "--q"))
              .eval(x));
    if (opt.target == "ASC")
      return rational_to_string(asc(need_index(opt.n, "--n"), x, need_rational(opt.a, "--a"),
                                    need_rational(opt.b, "--b"), need_rational(opt.q, "--q")));
    if (opt.target == "P")
      return rational_to_string(asc_p_coeffs(need_index(opt.n, "--n"), need_rational(opt.y, "--y"),
                                             need_rational(opt.rho, "--rho"), need_rational(opt.q, "--q"))
                                    .eval(x));
    if (opt.target == "omega")
      return rational_to_string(
          omega_poly(x, rational_from_string(ys), need_rational(opt.rho, "--rho")));
    if (opt.target == "Q")
      return rational_to_string(q_poly(need_index(opt.i, "--i"), need_index(opt.j, "--j"),
                                       need_rational(opt.rho, "--rho"), need_rational(opt.q, "--q"))
                                    .eval(x, rational_from_string(ys)));
    throw DomainError("--exact supports the polynomial targets (H, h, bqH, ASC, P, Q, omega)");
  };

  auto float_value = [&](double x, double y) -> double {
    if (opt.target == "H") return hermite_q(need_index(opt.n, "--n"), x, need_number(opt.q, "--q"));
    if (opt.target == "h") return hermite_cq(need_index(opt.n, "--n"), x, need_number(opt.q, "--q"));
    if (opt.target == "bqH")
      return big_hermite_q(need_index(opt.n, "--n"), x, need_number(opt.a, "--a"), need_number(opt.q, "--q"));
    if (opt.target == "ASC")
      return asc(need_index(opt.n, "--n"), x, need_number(opt.a, "--a"), need_number(opt.b, "--b"),
                 need_number(opt.q, "--q"));
    if (opt.target == "P")
      return asc_p(need_index(opt.n, "--n"), x, need_number(opt.y, "--y"), need_number(opt.rho, "--rho"),
                   need_number(opt.q, "--q"));
    if (opt.target == "phiH")
      return phi_H(x, need_number(opt.rho, "--rho"), need_number(opt.q, "--q"), policy);
    if (opt.target == "phiP")
      return phi_P(x, need_number(opt.y, "--y"), need_number(opt.rho, "--rho"),
                   need_number(opt.t, "--t"), need_number(opt.q, "--q"), policy);
    if (opt.target == "eta")
      return eta_n(need_index(opt.n, "--n"), x, need_number(opt.t, "--t"), need_number(opt.q, "--q"), policy);
    if (opt.target == "fN") return f_N(x, need_number(opt.q, "--q"), policy);
    if (opt.target == "fbN")
      return f_bN(x, need_number(opt.a, "--a"), need_number(opt.q, "--q"), policy);
    if (opt.target == "fCN")
      return f_CN(x, need_number(opt.y, "--y"), need_number(opt.rho, "--rho"), need_number(opt.q, "--q"),
                  policy);
    if (opt.target == "f2D")
      return f_2D(x, y, need_number(opt.rho, "--rho"), need_number(opt.q, "--q"), policy);
    if (opt.target == "gamma")
      return gamma_series(need_index(opt.i, "--i"), need_index(opt.j, "--j"),
                          KernelParams{x, y, need_number(opt.rho, "--rho"), need_number(opt.q, "--q")},
                          policy);
    if (opt.target == "Q")
      return q_poly_value(need_index(opt.i, "--i"), need_index(opt.j, "--j"), x, y,
                          need_number(opt.rho, "--rho"), need_number(opt.q, "--q"));
    if (opt.target == "omega") return omega_poly(x, y, need_number(opt.rho, "--rho"));
    if (opt.target == "recip-series") {
      double rho = need_number(opt.rho, "--rho"), qq = need_number(opt.q, "--q");
      if (opt.n) return reciprocal_series(x, y, rho, qq, *opt.n);
      return reciprocal_series_adaptive(x, y, rho, qq, policy);
    }
    throw DomainError("unhandled target");
  };

  std::vector<std::array<std::string, 3>> rows;  // x, y ("" if unused), value
  for (std::size_t a = 0; a < xg.values.size(); ++a)
    for (std::size_t b = 0; b < yg.values.size(); ++b) {
      std::string value = opt.exact ? exact_value(xg.literals[a], yg.literals[b])
                                    : format_double(float_value(xg.values[a], yg.values[b]));
      rows.push_back({opt.exact ? xg.literals[a] : format_double(xg.values[a]),
                      two_var ? (opt.exact ? yg.literals[b] : format_double(yg.values[b])) : "",
                      value});
    }

  std::string text;
  if (opt.format == "csv") {
    text = two_var ? "x,y,value\n" : "x,value\n";
    for (const auto& r : rows)
      text += two_var ? r[0] + "," + r[1] + "," + r[2] + "\n" : r[0] + "," + r[2] + "\n";
  } else if (opt.format == "json") {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json rec{{"x", r[0]}, {"value", r[2]}};
      if (two_var) rec["y"] = r[1];
      records.push_back(rec);
    }
    nlohmann::json doc{{"target", opt.target}, {"exact", opt.exact}, {"records", records}};
    text = doc.dump(2);
  } else {
    throw DomainError("unknown format '" + opt.format + "' (expected json or csv)");
  }
  write_output(text, opt.out);
  return 0;
}

int cmd_verify(const Options& opt) {
  CheckConfig cfg;
  cfg.trunc_tol = opt.trunc_tol;
  cfg.max_terms = opt.max_terms;
  cfg.tolerance_override = opt.tol_override;
  cfg.threads = opt.threads;
  if (opt.q) {
    cfg.q_grid.clear();
    std::stringstream ss(*opt.q);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.q_grid.push_back(parse_number(tok));
  }
  if (opt.rho) {
    cfg.rho_grid.clear();
    std::stringstream ss(*opt.rho);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.rho_grid.push_back(parse_number(tok));
  }
  std::vector<std::string> selection;
  std::stringstream ss(opt.suite.empty() ? std::string("all") : opt.suite);
  std::string tok;
  while (std::getline(ss, tok, ',')) selection.push_back(tok);

  Report report = run_suite(selection, cfg);
  write_output(report.to_json(!opt.no_runtime).dump(2), opt.out);
  return report.pass ? 0 : 1;
}

int cmd_gram(const Options& opt) {
  long n = need_index(opt.n, "--n");
  double rho = need_number(opt.rho, "--rho");
  double q = need_number(opt.q, "--q");
  GramMatrix gram = gram_matrix(n, rho, q);

  nlohmann::json gram_json = nlohmann::json::array();
  for (long r = 0; r <= n; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (long c = 0; c <= n; ++c) row.push_back(gram.entries(r, c));
    gram_json.push_back(row);
  }
  nlohmann::json doc{{"n", n}, {"rho", rho}, {"q", q}, {"gram", gram_json}};

  std::string csv;
  if (opt.format == "csv") {
    for (long r = 0; r <= n; ++r) {
      for (long c = 0; c <= n; ++c) csv += (c ? "," : "") + format_double(gram.entries(r, c));
      csv += "\n";
    }
  }

  if (opt.basis) {
    Eigen::MatrixXd basis = gram_schmidt_basis(gram);
    Eigen::MatrixXd residual = basis * gram.entries * basis.transpose() -
                               Eigen::MatrixXd::Identity(n + 1, n + 1);
    double norm = residual.cwiseAbs().maxCoeff();
    nlohmann::json basis_json = nlohmann::json::array();
    for (long r = 0; r <= n; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (long c = 0; c <= n; ++c) row.push_back(basis(r, c));
      basis_json.push_back(row);
    }
    doc["basis"] = basis_json;
    doc["orthonormality_residual"] = norm;
    if (opt.format == "csv") {
      csv += "\n";
      for (long r = 0; r <= n; ++r) {
        for (long c = 0; c <= n; ++c) csv += (c ? "," : "") + format_double(basis(r, c));
        csv += "\n";
      }
      csv += "\northonormality_residual," + format_double(norm) + "\n";
    }
  }

  write_output(opt.format == "csv" ? csv : doc.dump(2), opt.out);
  return 0;
}

int cmd_export_qtable(const Options& opt) {
  QPolyTable table(need_rational(opt.rho, "--rho"), need_rational(opt.q, "--q"), opt.max_degree);
  write_output(table.to_json(), opt.out);
  return 0;
}

nlohmann::json error_object(const char* type, const std::string& message) {
  return {{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-Hermite families, Poisson-Mehler kernels, bivariate Q-polynomials"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--q", opt.q, "q parameter (-1 < q <= 1; 'p/r' allowed)");
    sub->add_option("--rho", opt.rho, "correlation rho (|rho| < 1)");
    sub->add_option("--n", opt.n, "degree / level / truncation order");
    sub->add_option("--m", opt.m, "secondary degree");
    sub->add_option("--i", opt.i, "first bivariate index");
    sub->add_option("--j", opt.j, "second bivariate index");
    sub->add_option("--x", opt.x, "x argument");
    sub->add_option("--y", opt.y, "y argument");
    sub->add_option("--t", opt.t, "t parameter (generating-function order variable)");
    sub->add_option("--s", opt.s, "s parameter (second generating-function variable)");
    sub->add_option("--a", opt.a, "a parameter (big q-Hermite / ASC)");
    sub->add_option("--b", opt.b, "b parameter (ASC)");
    sub->add_option("--trunc-tol", opt.trunc_tol, "truncation tolerance for series/products");
    sub->add_option("--max-terms", opt.max_terms, "hard cap on series/product terms");
    sub->add_option("--format", opt.format, "output format: csv | json");
    sub->add_option("--out", opt.out, "output file (default stdout)");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate a family/kernel/density over a grid");
  eval->add_option("--target", opt.target,
                   "H|h|bqH|ASC|P|phiH|phiP|eta|fN|fbN|fCN|f2D|gamma|Q|omega|recip-series")
      ->required();
  eval->add_option("--grid", opt.grid, "grid spec 'x0:x1:count[,y0:y1:count]'");
  eval->add_flag("--exact", opt.exact, "exact rational evaluation (polynomial targets)");
  eval->add_flag("--allow-endpoints", opt.allow_endpoints, "do not clip grids into S(q)");
  add_common(eval);

  CLI::App* verify = app.add_subcommand("verify", "run identity-verification suites");
  verify->add_option("--suite", opt.suite, "'all' or comma-separated check names")->required();
  verify->add_option("--tol", opt.tol_override, "override residual tolerances");
  verify->add_option("--threads", opt.threads, "worker threads (also QMEHLER_THREADS)");
  verify->add_flag("--no-runtime", opt.no_runtime, "zero runtime_ms for byte-stable reports");
  add_common(verify);

  CLI::App* gram = app.add_subcommand("gram", "level-n Gram matrix and orthonormal basis");
  gram->add_flag("--basis", opt.basis, "also emit the Gram-Schmidt basis and its residual");
  add_common(gram);

  CLI::App* qtable = app.add_subcommand("export-qtable", "exact Q_{i,j} table as JSON");
  qtable->add_option("--max-degree", opt.max_degree, "max total degree i+j");
  add_common(qtable);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_object("UsageError", e.what()).dump() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(eval)) return cmd_eval(opt);
    if (app.got_subcommand(verify)) return cmd_verify(opt);
    if (app.got_subcommand(gram)) return cmd_gram(opt);
    if (app.got_subcommand(qtable)) return cmd_export_qtable(opt);
    std::cerr << error_object("UsageError", "no subcommand").dump() << "\n";
    return 2;
  } catch (const UnknownCheckError& e) {
    std::cerr << error_object("UnknownCheckError", e.what()).dump() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << error_object("DomainError", e.what()).dump() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << error_object("NumericalError", e.what()).dump() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << error_object("ConvergenceError", e.what()).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << error_object("Error", e.what()).dump() << "\n";
    return 2;
  }
}
