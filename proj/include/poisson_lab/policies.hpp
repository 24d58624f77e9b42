// policies.hpp -- reusable encoder policies and weight processes, including
// randomized ones for property testing the channel.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "poisson_lab/channel.hpp"

namespace poisson_lab {

/// Transmits nothing, for every message.
class ZeroPolicy final : public EncoderPolicy {
 public:
  RateSegment query(MessageId, double, const Timeline&, RandomSource&) const override {
    return {0.0, std::numeric_limits<double>::infinity()};
  }
};

/// Constant rate forever, ignoring feedback.
class ConstantPolicy final : public EncoderPolicy {
 public:
  explicit ConstantPolicy(double rate) : rate_(rate) {}
  RateSegment query(MessageId, double, const Timeline&, RandomSource&) const override {
    return {rate_, std::numeric_limits<double>::infinity()};
  }

 private:
  double rate_;
};

/// Rate `rate` until the first registered count, zero afterwards.
class UntilFirstCountPolicy final : public EncoderPolicy {
 public:
  explicit UntilFirstCountPolicy(double rate) : rate_(rate) {}
  RateSegment query(MessageId, double, const Timeline& history, RandomSource&) const override {
    return {history.empty() ? rate_ : 0.0, std::numeric_limits<double>::infinity()};
  }

 private:
  double rate_;
};

class ConstantWeight final : public WeightProcess {
 public:
  explicit ConstantWeight(double value) : value_(value) {}
  RateSegment query(double, const Timeline&, RandomSource&) const override {
    return {value_, std::numeric_limits<double>::infinity()};
  }

 private:
  double value_;
};

/// C(t) = 1{t <= min(first count, cutoff)}.
class UntilFirstCountWeight final : public WeightProcess {
 public:
  explicit UntilFirstCountWeight(double cutoff) : cutoff_(cutoff) {}
  RateSegment query(double now, const Timeline& history, RandomSource&) const override {
    if (!history.empty() || now >= cutoff_) return {0.0, std::numeric_limits<double>::infinity()};
    return {1.0, cutoff_};
  }

 private:
  double cutoff_;
};

/// Knobs for randomized piecewise programs.
struct FuzzOptions {
  double span = 3.0;          ///< breakpoints fall in (0, span)
  int max_breakpoints = 6;
  double max_value = 4.0;     ///< rates / weights drawn from [0, max_value]
  bool stop_at_first_count = false;
};

/// A random piecewise-constant program whose value may also depend on the
/// number of counts so far, the time since the last count, and private coin
/// flips at query time. Everything random about the schedule is fixed at
/// construction from `seed`; per-query randomness comes from the trial's
/// private stream.
class FuzzedProgram {
 public:
  FuzzedProgram(std::uint64_t seed, const FuzzOptions& options);

  RateSegment evaluate(double now, const Timeline& history, RandomSource& rng) const;
  std::uint64_t seed() const noexcept { return seed_; }
  const FuzzOptions& options() const noexcept { return options_; }

 private:
  std::uint64_t seed_;
  FuzzOptions options_;
  std::vector<double> breakpoints_;  // strictly increasing, first is 0
  std::vector<double> values_;       // one per breakpoint
  double count_factor_ = 1.0;        // value scaled by count_factor^counts
  double refractory_ = 0.0;          // value zero within this long of a count
  bool private_coins_ = false;       // random holds and jitter at query time
};

class FuzzedPolicy final : public EncoderPolicy {
 public:
  FuzzedPolicy(std::uint64_t seed, const FuzzOptions& options) : program_(seed, options) {}
  RateSegment query(MessageId message, double now, const Timeline& history,
                    RandomSource& rng) const override;
  const FuzzedProgram& program() const noexcept { return program_; }

 private:
  FuzzedProgram program_;
};

class FuzzedWeight final : public WeightProcess {
 public:
  FuzzedWeight(std::uint64_t seed, const FuzzOptions& options) : program_(seed, options) {}
  RateSegment query(double now, const Timeline& history, RandomSource& rng) const override {
    return program_.evaluate(now, history, rng);
  }

 private:
  FuzzedProgram program_;
};

}  // namespace poisson_lab
