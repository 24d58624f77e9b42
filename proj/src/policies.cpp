#include "poisson_lab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poisson_lab {

FuzzedProgram::FuzzedProgram(std::uint64_t seed, const FuzzOptions& options)
    : seed_(seed), options_(options) {
  if (!(options.span > 0.0) || options.max_breakpoints < 1 || !(options.max_value >= 0.0)) {
    throw std::invalid_argument("invalid fuzz options");
  }
  RandomSource rng(seed, 0x66757a7aULL);
  const int pieces = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(options.max_breakpoints));

  breakpoints_.push_back(0.0);
  for (int i = 1; i < pieces; ++i) breakpoints_.push_back(options.span * rng.uniform());
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());

  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    // Exact zeros exercise the silent-segment path.
    values_.push_back(rng.uniform() < 0.2 ? 0.0 : options.max_value * rng.uniform());
  }
  const auto feature = rng() % 4;
  if (feature == 1) count_factor_ = 0.25 + 1.5 * rng.uniform();
  if (feature == 2) refractory_ = 0.5 * options.span * rng.uniform();
  private_coins_ = (rng() & 1U) != 0;
}

RateSegment FuzzedProgram::evaluate(double now, const Timeline& history, RandomSource& rng) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (options_.stop_at_first_count && !history.empty()) return {0.0, inf};

  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), now);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  double value = values_[k];
  double until = it == breakpoints_.end() ? inf : *it;

  const auto counts = history.size();
  if (count_factor_ != 1.0 && counts > 0) {
    value = std::min(value * std::pow(count_factor_, static_cast<double>(counts)),
                     4.0 * options_.max_value);
  }
  if (refractory_ > 0.0 && counts > 0) {
    const double quiet_until = history.events().back() + refractory_;
    if (now < quiet_until) {
      value = 0.0;
      until = std::min(until, quiet_until);
    }
  }
  if (private_coins_ && rng.uniform() < 0.5) {
    const double hold_end = now + rng.exponential(2.0 / options_.span);
    if (hold_end > now) until = std::min(until, hold_end);
    value *= 0.5 + rng.uniform();
  }
  return {value, until};
}

RateSegment FuzzedPolicy::query(MessageId, double now, const Timeline& history,
                                RandomSource& rng) const {
  return program_.evaluate(now, history, rng);
}

}  // namespace poisson_lab
