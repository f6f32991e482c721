#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qmehler {

/// Parameter grids and policies shared by all checks of a suite run.
/// Defaults follow the library-wide verification grid: q spanning both signs
/// plus the semicircle case q = 0, rho up to 0.6, and a 5x5 (x,y) grid at 95%
/// of the S(q) half-width.
struct CheckConfig {
  std::vector<double> q_grid = {-0.5, 0.0, 0.3, 0.5, 0.9};
  std::vector<double> rho_grid = {0.0, 0.2, 0.4, 0.6};
  int xy_points = 5;
  double trunc_tol = 1e-12;
  long max_terms = 100000;
  std::optional<double> tolerance_override;
  int threads = 0;  // 0: QMEHLER_THREADS env or hardware concurrency

  nlohmann::json to_json() const;
};

struct CheckResult {
  std::string name;
  std::string mode;  // "exact" | "residual"
  nlohmann::json params;
  std::optional<double> residual;
  std::optional<bool> exact_pass;
  double tolerance = 0.0;
  bool pass = false;
  double runtime_ms = 0.0;
  std::optional<std::string> error;

  nlohmann::json to_json(bool include_runtime = true) const;
};

struct Report {
  std::string suite;
  CheckConfig config;
  std::vector<CheckResult> checks;
  bool pass = false;

  /// Reports are byte-identical across runs except for runtime_ms; pass
  /// include_runtime = false to canonicalize it away.
  nlohmann::json to_json(bool include_runtime = true) const;
};

/// Names of every registered identity check, in registry order.
const std::vector<std::string>& check_names();

/// Runs the selected checks ("all" or explicit names); unknown names throw
/// UnknownCheckError. Individual check failures/exceptions are captured in
/// their records and never abort the suite.
Report run_suite(const std::vector<std::string>& selection, const CheckConfig& config = {});

}  // namespace qmehler
