// random.hpp -- counter-based random streams keyed by (seed, stream-id).
//
// Every draw is a pure function of (seed, stream-id, counter), so a trial's
// randomness does not depend on which worker runs it or in what order.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace poisson_lab {

namespace detail {

/// Stafford "mix13" finalizer, as used by SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

/// A reproducible 64-bit random stream.
///
/// Output i is mix(mix(i + seed_key) ^ stream_key); two keys with a
/// nonlinear step in between keep streams from being shifted copies of each
/// other. Satisfies UniformRandomBitGenerator, so <random> distributions
/// accept it directly.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  RandomSource(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed),
        stream_(stream),
        seed_key_(detail::mix64(seed + detail::kGolden)),
        stream_key_(detail::mix64(detail::mix64(stream ^ 0x5851F42D4C957F2DULL) + seed_key_)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t x = detail::mix64(counter_++ * detail::kGolden + seed_key_);
    return detail::mix64(x ^ stream_key_);
  }

  /// Uniform on (0, 1] with 53 bits of resolution.
  double uniform() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Exponential with the given rate; rate must be positive.
  double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

  /// An independent child stream, e.g. a policy's private randomness.
  /// Children with distinct tags are independent of each other and of the parent.
  [[nodiscard]] RandomSource derive(std::uint64_t tag) const noexcept {
    return RandomSource(detail::mix64(seed_ ^ detail::mix64(tag + detail::kGolden)),
                        detail::mix64(stream_ + detail::kGolden) ^ tag);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t seed_key_;
  std::uint64_t stream_key_;
  std::uint64_t counter_ = 0;
};

}  // namespace poisson_lab
