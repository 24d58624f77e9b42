// process.hpp -- Poisson processes with piecewise-constant intensity.
//
// Sampling is exact: inter-arrival times are drawn from the exponential law of
// the segment in force, and a segment boundary simply restarts the clock
// (memorylessness), so no thinning is involved.
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "poisson_lab/random.hpp"

namespace poisson_lab {

/// Hard limit on counts per simulated path.
inline constexpr std::size_t kDefaultEventCap = 1'000'000;

/// Raised when a path produces more counts than the configured cap.
class RunawayIntensity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constant intensity on (issue time, valid_until].
struct RateSegment {
  double rate = 0.0;
  double valid_until = std::numeric_limits<double>::infinity();
};

/// Realized output of a counting process on [0, horizon].
class Timeline {
 public:
  explicit Timeline(double horizon);
  Timeline(double horizon, std::vector<double> events);

  double horizon() const noexcept { return horizon_; }
  std::span<const double> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  /// Time of the first count, if any.
  std::optional<double> first() const noexcept {
    if (events_.empty()) return std::nullopt;
    return events_.front();
  }

  /// Number of counts in (a, b]; requires 0 <= a <= b <= horizon.
  std::size_t count(double a, double b) const;

  /// Appends a count; t must exceed the last count and lie in [0, horizon].
  void append(double t);

  friend bool operator==(const Timeline&, const Timeline&) = default;

 private:
  double horizon_;
  std::vector<double> events_;
};

/// Rate-`rate` Poisson process on [0, horizon].
Timeline sample_homogeneous(double rate, double horizon, RandomSource& rng,
                            std::size_t event_cap = kDefaultEventCap);

/// Next count after `now` under a constant-rate segment, or nullopt when the
/// exponential clock runs past segment.valid_until.
std::optional<double> sample_next_event(double now, const RateSegment& segment,
                                        RandomSource& rng);

/// e^{-mean} mean^count / count!, evaluated in log space.
double poisson_pmf(double mean, long long count);

}  // namespace poisson_lab
