// statistics.hpp -- Monte Carlo estimators and confidence intervals.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace poisson_lab {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;
/// Two-sided 99.9% normal quantile.
inline constexpr double kZ999 = 3.2905267314918945;
/// Default acceptance threshold in standard errors.
inline constexpr double kPassSigmas = 4.0;

/// A Monte Carlo statistic.
struct Estimate {
  std::uint64_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  bool contains(double x) const noexcept { return ci_low <= x && x <= ci_high; }
};

/// Proportion successes/n with a continuity-corrected Wilson score interval.
///
/// The std_error field carries the plug-in binomial value sqrt(p(1-p)/n).
Estimate estimate_bernoulli(std::uint64_t successes, std::uint64_t n, double z = kZ95);

/// Sample mean with a normal interval; needs at least two samples.
Estimate estimate_mean(std::span<const double> samples, double z = kZ95);

/// Streaming mean/variance (Welford). Merging is associative, so partial
/// accumulators from independent workers can be reduced in any grouping.
class RunningStats {
 public:
  void add(double x) noexcept;
  void merge(const RunningStats& other) noexcept;

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; zero for fewer than two samples.
  double variance() const noexcept;
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

  /// Normal-interval estimate of the mean.
  Estimate to_estimate(double z = kZ95) const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Standard error of the uniform average of independent estimates.
double average_stderr(std::span<const Estimate> parts) noexcept;

/// |a - b| measured in combined standard errors; 0 when both are exact and
/// equal, infinity when both are exact and differ.
double separation_in_sigmas(const Estimate& a, double b_mean, double b_stderr) noexcept;

/// Pearson chi-square goodness of fit of observed counts against model
/// probabilities. Adjacent cells are pooled from the tails until each expected
/// count is at least `min_expected`.
struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities,
                               double min_expected = 5.0);

/// Two-sample Kolmogorov-Smirnov distance; inputs need not be sorted.
double ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace poisson_lab
