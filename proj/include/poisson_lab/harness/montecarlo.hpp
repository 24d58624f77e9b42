// montecarlo.hpp -- deterministic parallel Monte Carlo over independent trials.
//
// Trials are grouped into fixed-size chunks. Chunk results are merged in chunk
// order, so output is bit-identical whatever the worker count.
#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "poisson_lab/schemes.hpp"
#include "poisson_lab/statistics.hpp"

namespace poisson_lab::harness {

inline constexpr std::uint64_t kChunkSize = 1U << 14;

/// Hardware concurrency, capped by the POISSON_LAB_THREADS environment variable.
unsigned worker_count();

/// Evaluates fn(begin, end) -> Acc for each chunk of [0, n) and merges the
/// results in chunk order with Acc::merge.
template <class Acc, class Fn>
Acc run_chunked(std::uint64_t n, Fn fn) {
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Acc> partial(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        const std::uint64_t begin = c * kChunkSize;
        const std::uint64_t end = std::min(n, begin + kChunkSize);
        partial[c] = fn(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(chunks, 1)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  Acc total{};
  for (const auto& p : partial) total.merge(p);
  return total;
}

/// Stream id of trial `trial` of message `message`; independent of the scheme,
/// so schemes with the same law can be compared path by path.
constexpr std::uint64_t trial_stream(MessageId message, std::uint64_t trial) noexcept {
  return (static_cast<std::uint64_t>(message) << 40) | trial;
}

struct MessageStats {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  RunningStats energy;

  void merge(const MessageStats& other) noexcept {
    trials += other.trials;
    errors += other.errors;
    energy.merge(other.energy);
  }
  Estimate p_err(double z = kZ95) const { return estimate_bernoulli(errors, trials, z); }
  Estimate energy_estimate(double z = kZ95) const { return energy.to_estimate(z); }
};

/// n decoded transmissions of one message.
MessageStats simulate_message(const Scheme& scheme, MessageId message, std::uint64_t n,
                              std::uint64_t seed);

/// Equiprobable averages over a full set of per-message statistics.
struct AverageStats {
  Estimate p_err;
  Estimate energy;
};
AverageStats average_over_messages(std::span<const MessageStats> per_message, double z = kZ95);

/// All M messages, n trials each.
struct SchemeStats {
  std::vector<MessageStats> per_message;
  AverageStats average;
};
SchemeStats simulate_scheme(const Scheme& scheme, std::uint64_t n, std::uint64_t seed);

}  // namespace poisson_lab::harness
