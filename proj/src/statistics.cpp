#include "poisson_lab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace poisson_lab {

Estimate estimate_bernoulli(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) throw std::invalid_argument("estimate_bernoulli requires n >= 1");
  if (successes > n) throw std::invalid_argument("estimate_bernoulli requires successes <= n");
  if (!(z > 0.0)) throw std::invalid_argument("estimate_bernoulli requires z > 0");

  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double q = 1.0 - p;
  const double z2 = z * z;
  const double denom = 2.0 * (nn + z2);

  Estimate e;
  e.n = n;
  e.mean = p;
  e.std_error = std::sqrt(p * q / nn);
  // Newcombe's continuity-corrected score interval.
  if (successes == 0) {
    e.ci_low = 0.0;
  } else {
    const double root = std::sqrt(std::max(0.0, z2 - 2.0 - 1.0 / nn + 4.0 * p * (nn * q + 1.0)));
    e.ci_low = std::max(0.0, (2.0 * nn * p + z2 - 1.0 - z * root) / denom);
  }
  if (successes == n) {
    e.ci_high = 1.0;
  } else {
    const double root = std::sqrt(std::max(0.0, z2 + 2.0 - 1.0 / nn + 4.0 * p * (nn * q - 1.0)));
    e.ci_high = std::min(1.0, (2.0 * nn * p + z2 + 1.0 + z * root) / denom);
  }
  e.ci_low = std::min(e.ci_low, p);
  e.ci_high = std::max(e.ci_high, p);
  return e;
}

Estimate estimate_mean(std::span<const double> samples, double z) {
  if (samples.size() < 2) throw std::invalid_argument("estimate_mean requires at least two samples");
  RunningStats stats;
  for (double x : samples) stats.add(x);
  return stats.to_estimate(z);
}

void RunningStats::add(double x) noexcept {
  if (n_ == 0) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
}

double RunningStats::variance() const noexcept {
  if (n_ < 2) return 0.0;
  return std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

Estimate RunningStats::to_estimate(double z) const {
  Estimate e;
  e.n = n_;
  e.mean = mean_;
  e.std_error = n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  // Constant samples: keep the interval exactly degenerate.
  if (n_ > 0 && min_ == max_) {
    e.mean = min_;
    e.std_error = 0.0;
  }
  e.ci_low = e.mean - z * e.std_error;
  e.ci_high = e.mean + z * e.std_error;
  return e;
}

double average_stderr(std::span<const Estimate> parts) noexcept {
  if (parts.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : parts) sum += p.std_error * p.std_error;
  return std::sqrt(sum) / static_cast<double>(parts.size());
}

double separation_in_sigmas(const Estimate& a, double b_mean, double b_stderr) noexcept {
  const double diff = std::abs(a.mean - b_mean);
  const double se = std::hypot(a.std_error, b_stderr);
  if (se == 0.0) {
    const double scale = std::max({1.0, std::abs(a.mean), std::abs(b_mean)});
    return diff <= 1e-12 * scale ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return diff / se;
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities, double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw std::invalid_argument("chi_square_gof: observed and probabilities must match and be nonempty");
  }
  std::uint64_t total = 0;
  for (auto c : observed) total += c;
  if (total == 0) throw std::invalid_argument("chi_square_gof: no observations");
  const double n = static_cast<double>(total);

  struct Cell {
    double obs;
    double expected;
  };
  std::vector<Cell> cells;
  cells.reserve(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    cells.push_back({static_cast<double>(observed[i]), n * probabilities[i]});
  }
  // Pool sparse tails inward.
  while (cells.size() > 1 && cells.front().expected < min_expected) {
    cells[1].obs += cells[0].obs;
    cells[1].expected += cells[0].expected;
    cells.erase(cells.begin());
  }
  while (cells.size() > 1 && cells.back().expected < min_expected) {
    cells[cells.size() - 2].obs += cells.back().obs;
    cells[cells.size() - 2].expected += cells.back().expected;
    cells.pop_back();
  }

  ChiSquareResult r;
  r.dof = static_cast<int>(cells.size()) - 1;
  for (const auto& c : cells) {
    if (c.expected <= 0.0) {
      if (c.obs > 0.0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    const double d = c.obs - c.expected;
    r.statistic += d * d / c.expected;
  }
  if (r.dof < 1) {
    r.p_value = 1.0;
  } else if (!std::isfinite(r.statistic)) {
    r.p_value = 0.0;
  } else {
    boost::math::chi_squared dist(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  }
  return r;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace poisson_lab
