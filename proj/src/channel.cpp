#include "poisson_lab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace poisson_lab {

void ChannelParams::validate() const {
  if (!(dark_current >= 0.0) || !std::isfinite(dark_current)) {
    throw std::invalid_argument("dark current must be finite and >= 0");
  }
  if (peak_power && !(*peak_power > 0.0)) {
    throw std::invalid_argument("peak power must be > 0 when set");
  }
}

double path_energy(std::span<const EnergySegment> segments) {
  double energy = 0.0;
  for (const auto& s : segments) {
    if (!(s.duration >= 0.0)) throw std::invalid_argument("segment duration must be >= 0");
    if (!(s.rate >= 0.0)) throw std::invalid_argument("segment rate must be >= 0");
    energy += s.rate * s.duration;
  }
  return energy;
}

void TrialResult::decode_with(const Decoder& decoder) {
  decoded = decoder(timeline);
  correct = *decoded == message;
}

namespace {

RateSegment checked(RateSegment seg, double now, const ChannelParams& params, const char* who) {
  auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os << who << " at t=" << now << ": " << why << " (rate=" << seg.rate
       << ", valid_until=" << seg.valid_until << ")";
    throw PolicyViolation(os.str());
  };
  if (!(seg.rate >= 0.0) || !std::isfinite(seg.rate)) fail("rate must be finite and >= 0");
  if (params.peak_power && seg.rate > *params.peak_power) fail("rate exceeds the peak-power cap");
  if (!(seg.valid_until > now)) fail("segment must end after the query time");
  return seg;
}

// Shared closed loop. With weight == nullptr only the trial is produced.
WeightedPath drive(const EncoderPolicy& policy, const WeightProcess* weight, MessageId message,
                   const ChannelParams& params, double horizon, RandomSource& rng,
                   std::size_t event_cap) {
  params.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("trial horizon must be finite and > 0");
  }
  const double dark = params.dark_current;
  const ChannelParams unbounded{dark, std::nullopt};

  WeightedPath out;
  TrialResult& trial = out.trial;
  trial.message = message;
  trial.timeline = Timeline(horizon);
  Timeline& timeline = trial.timeline;

  RandomSource policy_rng = rng.derive(kPolicyStreamTag);
  RandomSource weight_rng = rng.derive(kWeightStreamTag);

  double now = 0.0;
  RateSegment input = checked(policy.query(message, now, timeline, policy_rng), now, params, "policy");
  RateSegment c;
  if (weight) c = checked(weight->query(now, timeline, weight_rng), now, unbounded, "weight");

  while (now < horizon) {
    double boundary = std::min(input.valid_until, horizon);
    if (weight) boundary = std::min(boundary, c.valid_until);

    const RateSegment total{input.rate + dark, boundary};
    const std::optional<double> event =
        total.rate > 0.0 ? sample_next_event(now, total, rng) : std::nullopt;
    const double end = event ? *event : boundary;
    const double duration = end - now;

    trial.segments.push_back({input.rate, duration});
    if (weight) out.weighted_intensity += c.rate * total.rate * duration;
    now = end;

    if (event) {
      if (timeline.size() >= event_cap) {
        throw RunawayIntensity("event cap of " + std::to_string(event_cap) +
                               " exceeded at t=" + std::to_string(now));
      }
      timeline.append(now);
      // Left-limit convention: the weight in force on the interval ending here.
      if (weight) out.weighted_counts += c.rate;
      if (now >= horizon) break;
      input = checked(policy.query(message, now, timeline, policy_rng), now, params, "policy");
      if (weight) c = checked(weight->query(now, timeline, weight_rng), now, unbounded, "weight");
    } else {
      if (now >= horizon) break;
      if (input.valid_until <= now) {
        input = checked(policy.query(message, now, timeline, policy_rng), now, params, "policy");
      }
      if (weight && c.valid_until <= now) {
        c = checked(weight->query(now, timeline, weight_rng), now, unbounded, "weight");
      }
    }
  }

  trial.energy = path_energy(trial.segments);
  return out;
}

}  // namespace

TrialResult run_trial(const EncoderPolicy& policy, MessageId message, const ChannelParams& params,
                      double horizon, RandomSource& rng, std::size_t event_cap) {
  return drive(policy, nullptr, message, params, horizon, rng, event_cap).trial;
}

WeightedPath run_weighted_trial(const EncoderPolicy& policy, const WeightProcess& weight,
                                MessageId message, const ChannelParams& params, double horizon,
                                RandomSource& rng, std::size_t event_cap) {
  return drive(policy, &weight, message, params, horizon, rng, event_cap);
}

IdentityReport verify_intensity_identity(const EncoderPolicy& policy, const WeightProcess& weight,
                                         MessageId message, const ChannelParams& params,
                                         double horizon, std::uint64_t n_trials,
                                         const RandomSource& rng, double sigmas) {
  if (n_trials < 1000) throw std::invalid_argument("verify_intensity_identity needs n_trials >= 1000");
  RunningStats lhs;
  RunningStats rhs;
  for (std::uint64_t i = 0; i < n_trials; ++i) {
    RandomSource trial_rng = rng.derive(i);
    const WeightedPath path = run_weighted_trial(policy, weight, message, params, horizon, trial_rng);
    lhs.add(path.weighted_counts);
    rhs.add(path.weighted_intensity);
  }
  IdentityReport r;
  r.lhs = lhs.to_estimate();
  r.rhs = rhs.to_estimate();
  r.combined_stderr = std::hypot(r.lhs.std_error, r.rhs.std_error);
  r.difference = r.lhs.mean - r.rhs.mean;
  r.pass = separation_in_sigmas(r.lhs, r.rhs.mean, r.rhs.std_error) <= sigmas;
  return r;
}

}  // namespace poisson_lab
