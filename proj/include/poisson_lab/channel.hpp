// channel.hpp -- the Poisson channel with dark current and instantaneous,
// noiseless count feedback.
//
// An encoder is a predictable intensity program. The channel asks it for a
// rate at time 0, at every registered count, and whenever the previous answer
// expires; the answer governs (now, valid_until]. The policy therefore only
// ever sees counts strictly before the interval it controls.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "poisson_lab/process.hpp"
#include "poisson_lab/random.hpp"
#include "poisson_lab/statistics.hpp"

namespace poisson_lab {

using MessageId = int;

/// Raised when a policy answers with a negative, non-finite, over-peak or
/// already-expired segment.
class PolicyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChannelParams {
  double dark_current = 0.0;
  std::optional<double> peak_power;

  void validate() const;
};

class EncoderPolicy {
 public:
  virtual ~EncoderPolicy() = default;

  /// Rate to transmit on (now, valid_until] given the counts so far.
  /// `rng` is the policy's private stream for the current trial.
  virtual RateSegment query(MessageId message, double now, const Timeline& history,
                            RandomSource& rng) const = 0;
};

/// A nonnegative predictable weight C(t), queried like an encoder.
class WeightProcess {
 public:
  virtual ~WeightProcess() = default;
  virtual RateSegment query(double now, const Timeline& history, RandomSource& rng) const = 0;
};

/// Deterministic map from channel output to a message guess.
using Decoder = std::function<MessageId(const Timeline&)>;

/// A traversed piece of the input: constant rate for `duration`.
struct EnergySegment {
  double rate = 0.0;
  double duration = 0.0;
};

/// Exact transmitted energy of a path: sum of rate * duration.
double path_energy(std::span<const EnergySegment> segments);

struct TrialResult {
  MessageId message = 0;
  Timeline timeline{0.0};
  /// Input energy only; dark current is free.
  double energy = 0.0;
  std::vector<EnergySegment> segments;
  std::optional<MessageId> decoded;
  bool correct = false;

  /// Fills decoded/correct from the timeline.
  void decode_with(const Decoder& decoder);
};

/// Stream tags derived from a trial's RandomSource.
inline constexpr std::uint64_t kPolicyStreamTag = 0x706f6c6963790001ULL;
inline constexpr std::uint64_t kWeightStreamTag = 0x7765696768740002ULL;

/// Simulates one transmission of `message` on [0, horizon]. Channel draws
/// come from `rng`; the policy's private draws from rng.derive(kPolicyStreamTag).
TrialResult run_trial(const EncoderPolicy& policy, MessageId message, const ChannelParams& params,
                      double horizon, RandomSource& rng,
                      std::size_t event_cap = kDefaultEventCap);

/// Per-path values of both sides of the intensity identity
/// E[int C dY] = E[int C (X + dark) dt].
struct WeightedPath {
  TrialResult trial;
  /// Sum of C over counts, C taken from the segment governing each count.
  double weighted_counts = 0.0;
  /// Exact integral of C (X + dark) over [0, horizon].
  double weighted_intensity = 0.0;
};

WeightedPath run_weighted_trial(const EncoderPolicy& policy, const WeightProcess& weight,
                                MessageId message, const ChannelParams& params, double horizon,
                                RandomSource& rng, std::size_t event_cap = kDefaultEventCap);

struct IdentityReport {
  Estimate lhs;
  Estimate rhs;
  double combined_stderr = 0.0;
  double difference = 0.0;
  bool pass = false;
};

/// Monte Carlo check of the intensity identity. Trial i runs on
/// rng.derive(i); passes iff |lhs - rhs| <= sigmas * combined stderr.
IdentityReport verify_intensity_identity(const EncoderPolicy& policy, const WeightProcess& weight,
                                         MessageId message, const ChannelParams& params,
                                         double horizon, std::uint64_t n_trials,
                                         const RandomSource& rng, double sigmas = kPassSigmas);

}  // namespace poisson_lab
