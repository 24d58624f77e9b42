#include "poisson_lab/process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace poisson_lab {

Timeline::Timeline(double horizon) : horizon_(horizon) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("timeline horizon must be finite and >= 0");
  }
}

Timeline::Timeline(double horizon, std::vector<double> events) : Timeline(horizon) {
  events_.reserve(events.size());
  for (double t : events) append(t);
}

std::size_t Timeline::count(double a, double b) const {
  if (!(a >= 0.0 && a <= b && b <= horizon_)) {
    throw std::invalid_argument("count(a, b] requires 0 <= a <= b <= horizon");
  }
  const auto lo = std::upper_bound(events_.begin(), events_.end(), a);
  const auto hi = std::upper_bound(events_.begin(), events_.end(), b);
  return static_cast<std::size_t>(hi - lo);
}

void Timeline::append(double t) {
  if (!(t >= 0.0 && t <= horizon_)) {
    throw std::invalid_argument("event time " + std::to_string(t) + " outside [0, horizon]");
  }
  if (!events_.empty() && !(t > events_.back())) {
    throw std::invalid_argument("event times must be strictly increasing");
  }
  events_.push_back(t);
}

std::optional<double> sample_next_event(double now, const RateSegment& segment,
                                        RandomSource& rng) {
  if (!(now < segment.valid_until)) {
    throw std::invalid_argument("sample_next_event requires now < valid_until");
  }
  if (!(segment.rate >= 0.0)) {
    throw std::invalid_argument("segment rate must be >= 0");
  }
  if (segment.rate == 0.0) return std::nullopt;
  double t = now + rng.exponential(segment.rate);
  // A gap below one ulp of `now` would collide with the previous count.
  if (t <= now) t = std::nextafter(now, std::numeric_limits<double>::infinity());
  if (t > segment.valid_until) return std::nullopt;
  return t;
}

Timeline sample_homogeneous(double rate, double horizon, RandomSource& rng,
                            std::size_t event_cap) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("rate must be finite and >= 0");
  }
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be finite and >= 0");
  }
  Timeline timeline(horizon);
  if (rate == 0.0 || horizon == 0.0) return timeline;
  const RateSegment segment{rate, horizon};
  double now = 0.0;
  while (auto t = sample_next_event(now, segment, rng)) {
    if (timeline.size() >= event_cap) {
      throw RunawayIntensity("event cap of " + std::to_string(event_cap) + " exceeded");
    }
    timeline.append(*t);
    now = *t;
    if (now >= horizon) break;
  }
  return timeline;
}

double poisson_pmf(double mean, long long count) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson_pmf mean must be finite and >= 0");
  }
  if (count < 0) throw std::invalid_argument("poisson_pmf count must be >= 0");
  if (mean == 0.0) return count == 0 ? 1.0 : 0.0;
  const double nu = static_cast<double>(count);
  return std::exp(-mean + nu * std::log(mean) - std::lgamma(nu + 1.0));
}

}  // namespace poisson_lab
