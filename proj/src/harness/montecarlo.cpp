#include "poisson_lab/harness/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace poisson_lab::harness {

unsigned worker_count() {
  unsigned n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("POISSON_LAB_THREADS")) {
    unsigned cap = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
    if (ec == std::errc() && cap > 0) n = std::min(n, cap);
  }
  return n;
}

MessageStats simulate_message(const Scheme& scheme, MessageId message, std::uint64_t n,
                              std::uint64_t seed) {
  if (message < 0 || message >= scheme.spec.M) {
    throw std::invalid_argument("message " + std::to_string(message) + " out of range");
  }
  if (n >= (std::uint64_t{1} << 40)) throw std::invalid_argument("too many trials per message");
  return run_chunked<MessageStats>(n, [&](std::uint64_t begin, std::uint64_t end) {
    MessageStats s;
    for (std::uint64_t i = begin; i < end; ++i) {
      RandomSource rng(seed, trial_stream(message, i));
      const TrialResult r = scheme.run(message, rng);
      ++s.trials;
      if (!r.correct) ++s.errors;
      s.energy.add(r.energy);
    }
    return s;
  });
}

AverageStats average_over_messages(std::span<const MessageStats> per_message, double z) {
  if (per_message.empty()) throw std::invalid_argument("no messages to average");
  const double m = static_cast<double>(per_message.size());
  std::uint64_t trials = 0, errors = 0;
  double p_var = 0.0;
  std::vector<Estimate> energies;
  for (const auto& s : per_message) {
    trials += s.trials;
    errors += s.errors;
    const Estimate p = s.p_err(z);
    p_var += p.std_error * p.std_error;
    energies.push_back(s.energy_estimate(z));
  }

  AverageStats avg;
  // Pooled counts give the uniform average when every message ran n trials;
  // the stderr is the stratified one.
  avg.p_err = estimate_bernoulli(errors, trials, z);
  avg.p_err.std_error = std::sqrt(p_var) / m;

  double mean = 0.0;
  for (const auto& e : energies) mean += e.mean;
  avg.energy.n = trials;
  avg.energy.mean = mean / m;
  avg.energy.std_error = average_stderr(energies);
  avg.energy.ci_low = avg.energy.mean - z * avg.energy.std_error;
  avg.energy.ci_high = avg.energy.mean + z * avg.energy.std_error;
  return avg;
}

SchemeStats simulate_scheme(const Scheme& scheme, std::uint64_t n, std::uint64_t seed) {
  SchemeStats out;
  for (MessageId m = 0; m < scheme.spec.M; ++m) {
    out.per_message.push_back(simulate_message(scheme, m, n, seed));
  }
  out.average = average_over_messages(out.per_message);
  return out;
}

}  // namespace poisson_lab::harness
