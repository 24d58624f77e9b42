// commands.hpp -- the simulate / sweep / frontier / verify experiments.
//
// Each command validates its whole input before running anything and returns
// plain rows; the CLI only parses flags and writes the rows out.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poisson_lab/analytics.hpp"
#include "poisson_lab/harness/config.hpp"
#include "poisson_lab/harness/report.hpp"
#include "poisson_lab/schemes.hpp"

namespace poisson_lab::harness {

// ---------------------------------------------------------------- simulate

/// Per-message rows, plus an "avg" row when every message was simulated.
std::vector<ReportRow> cmd_simulate(const ExperimentConfig& config);

// ---------------------------------------------------------------- sweep

inline constexpr std::size_t kMaxSweepPoints = 10'000;

struct SweepAxis {
  std::string name;  ///< A, horizon, dark_current or M
  std::vector<double> values;
};

/// "A=1,2,3", "horizon=lin:0.1:1:10" or "horizon=log:1e-3:1e-1:3".
SweepAxis parse_axis(std::string_view text);

/// Row-major over the axes (first axis outermost), simulate rows per point.
std::vector<ReportRow> cmd_sweep(const ExperimentConfig& config, std::span<const SweepAxis> axes);

// ---------------------------------------------------------------- frontier

struct FrontierQuery {
  double target_error = 0.01;
  double dark_current = 0.0;
  int M = 2;
  double A_min = 1.0;
  double A_max = 1e4;
  double horizon_min = 1e-6;
  double horizon_max = 100.0;
  std::uint64_t n_trials = 1'000'000;
  std::uint64_t seed = 0;
  /// Log-spaced power grid for the closed-form search.
  int A_grid = 41;
  /// Grids for the Monte Carlo search (M-ary with dark current).
  int mc_A_grid = 5;
  int mc_horizon_grid = 16;

  void validate() const;
};

struct FrontierResult {
  bool feasible = false;
  /// "closed-form", "monte-carlo" or "blind-guess".
  std::string method;
  std::optional<SchemeSpec> spec;
  double energy_avg = 0.0;
  double p_err_avg = 0.0;
  std::optional<Estimate> mc_energy;
  std::optional<Estimate> mc_p_err;
  double converse_floor = 0.0;
  /// (M - 1)/M - eps: no scheme in the family goes below this at error eps.
  double floor_at_target = 0.0;
  bool certificate_pass = false;
  std::string note;
};

FrontierResult cmd_frontier(const FrontierQuery& query);
Table frontier_table(const FrontierQuery& query, const FrontierResult& result);

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  std::uint64_t n_trials = 100'000;
  std::uint64_t oracle_trials = 1'000'000;
  int fuzz_count = 50;
  std::uint64_t seed = 0;
  double sigmas = kPassSigmas;
};

struct VerifyCheck {
  std::string suite;
  std::string name;
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;
  double rhs_stderr = 0.0;
  /// Measured statistic compared against `threshold` (sigmas, p-value, distance).
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

std::vector<std::string> available_suites();
/// Throws ConfigError on an empty or unknown selector. "all" selects every suite.
std::vector<std::string> resolve_suites(std::span<const std::string> selector);
std::vector<VerifyCheck> cmd_verify(std::span<const std::string> suites, const VerifyOptions& options);
Table verify_table(std::span<const VerifyCheck> checks);

// Individual suites, usable on their own.
std::vector<VerifyCheck> verify_identity_suite(const VerifyOptions& options);
std::vector<VerifyCheck> verify_converse_suite(const VerifyOptions& options);
std::vector<VerifyCheck> verify_oracle_suite(const VerifyOptions& options);
std::vector<VerifyCheck> verify_substrate_suite(const VerifyOptions& options);

}  // namespace poisson_lab::harness
