#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "poisson_lab/channel.hpp"
#include "poisson_lab/policies.hpp"

using namespace poisson_lab;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Always answers with the same segment.
class ScriptedPolicy final : public EncoderPolicy {
 public:
  explicit ScriptedPolicy(RateSegment answer) : answer_(answer) {}
  RateSegment query(MessageId, double, const Timeline&, RandomSource&) const override {
    return answer_;
  }

 private:
  RateSegment answer_;
};

struct Query {
  double now;
  std::vector<double> history;
};

// Rate 1.5 on pieces of length 0.4, logging every query.
class LoggingPolicy final : public EncoderPolicy {
 public:
  mutable std::vector<Query> log;
  RateSegment query(MessageId, double now, const Timeline& history, RandomSource&) const override {
    log.push_back({now, {history.events().begin(), history.events().end()}});
    return {1.5, now + 0.4};
  }
};

}  // namespace

TEST_SUITE("feedback_channel") {
  TEST_CASE("path_energy sums rate times duration") {
    const std::vector<EnergySegment> segs = {{2.0, 0.5}, {0.0, 3.0}, {4.0, 0.25}};
    CHECK(path_energy(segs) == doctest::Approx(2.0));
    CHECK(path_energy({}) == 0.0);
    const std::vector<EnergySegment> bad = {{1.0, -0.5}};
    CHECK_THROWS(path_energy(bad));
  }

  TEST_CASE("channel params validation") {
    CHECK_NOTHROW(ChannelParams{0.0, std::nullopt}.validate());
    CHECK_THROWS(ChannelParams{-1.0, std::nullopt}.validate());
    CHECK_THROWS(ChannelParams{0.0, -2.0}.validate());
    CHECK_THROWS(ChannelParams{inf, std::nullopt}.validate());
  }

  TEST_CASE("constant input energy is exact and independent of dark current") {
    const ConstantPolicy policy(2.0);
    for (double dark : {0.0, 0.5, 5.0}) {
      RandomSource rng(1, 0);
      const auto r = run_trial(policy, 1, {dark, std::nullopt}, 3.0, rng);
      CHECK(r.energy == doctest::Approx(6.0).epsilon(1e-14));
    }
  }

  TEST_CASE("zero policy has zero energy and counts only dark current") {
    const ZeroPolicy policy;
    RunningStats counts;
    for (std::uint64_t i = 0; i < 20000; ++i) {
      RandomSource rng(2, i);
      const auto r = run_trial(policy, 0, {0.7, std::nullopt}, 2.0, rng);
      REQUIRE(r.energy == 0.0);
      counts.add(static_cast<double>(r.timeline.size()));
    }
    const auto e = counts.to_estimate();
    CHECK(std::abs(e.mean - 1.4) <= 4.0 * e.std_error);
  }

  TEST_CASE("policy violations are rejected") {
    RandomSource rng(3, 0);
    SUBCASE("negative rate") {
      const ScriptedPolicy p({-1.0, inf});
      CHECK_THROWS_AS(run_trial(p, 0, {}, 1.0, rng), PolicyViolation);
    }
    SUBCASE("non-finite rate") {
      const ScriptedPolicy p({inf, inf});
      CHECK_THROWS_AS(run_trial(p, 0, {}, 1.0, rng), PolicyViolation);
    }
    SUBCASE("over peak") {
      const ScriptedPolicy p({2.0, inf});
      CHECK_THROWS_AS(run_trial(p, 0, {0.0, 1.0}, 1.0, rng), PolicyViolation);
    }
    SUBCASE("expired segment") {
      const ScriptedPolicy p({1.0, 0.0});
      CHECK_THROWS_AS(run_trial(p, 0, {}, 1.0, rng), PolicyViolation);
    }
    SUBCASE("peak exactly met is fine") {
      const ScriptedPolicy p({1.0, inf});
      CHECK_NOTHROW(run_trial(p, 0, {0.0, 1.0}, 1.0, rng));
    }
  }

  TEST_CASE("runaway intensity surfaces as an error") {
    const ConstantPolicy p(1e6);
    RandomSource rng(4, 0);
    CHECK_THROWS_AS(run_trial(p, 0, {}, 10.0, rng, 1000), RunawayIntensity);
  }

  TEST_CASE("policy sees only the past, at time 0, counts and expiries") {
    for (std::uint64_t s = 0; s < 200; ++s) {
      const LoggingPolicy p;
      RandomSource rng(5, s);
      const auto r = run_trial(p, 0, {0.3, std::nullopt}, 2.0, rng);
      REQUIRE_FALSE(p.log.empty());
      CHECK(p.log.front().now == 0.0);
      double prev = -1.0;
      for (const auto& q : p.log) {
        CHECK(q.now > prev);
        prev = q.now;
        for (double t : q.history) CHECK(t <= q.now);
        CHECK(q.history.size() == static_cast<std::size_t>(r.timeline.count(0.0, q.now)));
        // Every query is either an event time or a segment expiry.
        bool at_event = false;
        for (double t : r.timeline.events()) at_event = at_event || t == q.now;
        bool at_expiry = false;
        for (const auto& other : p.log) at_expiry = at_expiry || std::abs(other.now + 0.4 - q.now) < 1e-12;
        CHECK((q.now == 0.0 || at_event || at_expiry));
      }
      for (double t : r.timeline.events()) {
        bool queried = false;
        for (const auto& q : p.log) queried = queried || q.now == t;
        CHECK(queried);
      }
    }
  }

  TEST_CASE("trials are reproducible and energy stays within peak times horizon") {
    FuzzOptions opts;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const FuzzedPolicy p(seed, opts);
      const ChannelParams params{0.5, 4.0 * opts.max_value};
      for (std::uint64_t s = 0; s < 20; ++s) {
        RandomSource a(6, s), b(6, s);
        const auto ra = run_trial(p, 1, params, 3.0, a);
        const auto rb = run_trial(p, 1, params, 3.0, b);
        CHECK(ra.timeline == rb.timeline);
        CHECK(ra.energy == rb.energy);
        CHECK(ra.energy >= 0.0);
        CHECK(ra.energy <= *params.peak_power * 3.0 * (1 + 1e-12));
        double total = 0.0;
        for (const auto& seg : ra.segments) total += seg.duration;
        CHECK(total == doctest::Approx(3.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("stop-at-first-count energy matches the truncated exponential integral") {
    struct Case {
      double A, dark, T;
    };
    for (const Case c : {Case{1.0, 0.0, 2.0}, Case{3.0, 0.0, 0.5}, Case{2.0, 1.0, 1.0}, Case{0.5, 2.0, 4.0}}) {
      const double oracle = test::truncated_transmit_energy(c.A, c.A + c.dark, c.T);
      const UntilFirstCountPolicy p(c.A);
      RunningStats energy;
      for (std::uint64_t i = 0; i < 200000; ++i) {
        RandomSource rng(7, i);
        const auto r = run_trial(p, 1, {c.dark, c.A}, c.T, rng);
        // Nothing transmitted after the first count.
        if (!r.timeline.empty()) REQUIRE(r.energy <= c.A * *r.timeline.first() * (1 + 1e-12));
        energy.add(r.energy);
      }
      const auto e = energy.to_estimate();
      CAPTURE(c.A);
      CAPTURE(c.dark);
      CHECK(std::abs(e.mean - oracle) <= 4.0 * e.std_error);
    }
  }

  TEST_CASE("weighted path with unit weight counts events and integrates the intensity") {
    const ConstantPolicy p(1.5);
    const ConstantWeight w(1.0);
    RandomSource rng(8, 0);
    const auto path = run_weighted_trial(p, w, 0, {0.5, std::nullopt}, 2.0, rng);
    CHECK(path.weighted_counts == static_cast<double>(path.trial.timeline.size()));
    CHECK(path.weighted_intensity == doctest::Approx(4.0).epsilon(1e-14));
  }

  TEST_CASE("weighted path uses the left limit of the weight at each count") {
    const ConstantPolicy p(3.0);
    const UntilFirstCountWeight w(10.0);
    for (std::uint64_t s = 0; s < 100; ++s) {
      RandomSource rng(9, s);
      const auto path = run_weighted_trial(p, w, 0, {}, 2.0, rng);
      const auto& tl = path.trial.timeline;
      CHECK(path.weighted_counts == (tl.empty() ? 0.0 : 1.0));
      const double until = tl.empty() ? 2.0 : *tl.first();
      CHECK(path.weighted_intensity == doctest::Approx(3.0 * until).epsilon(1e-12));
    }
  }

  TEST_CASE("intensity identity for the first-count indicator weight") {
    const UntilFirstCountPolicy p(1.0);
    const UntilFirstCountWeight w(3.0);
    const auto rep = verify_intensity_identity(p, w, 1, {}, 3.0, 100000, RandomSource(10, 0));
    CHECK(rep.pass);
    // Both sides equal P(T1 <= 3) = 1 - e^-3.
    const double oracle = 1.0 - test::exponential_tail_by_quadrature(1.0, 3.0);
    CHECK(std::abs(rep.lhs.mean - oracle) <= 4.0 * rep.lhs.std_error);
    CHECK(std::abs(rep.rhs.mean - oracle) <= 4.0 * rep.rhs.std_error);
  }

  TEST_CASE("intensity identity holds for fuzzed policy and weight pairs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      FuzzOptions po;
      po.stop_at_first_count = seed % 2 == 0;
      const FuzzedPolicy p(seed, po);
      const FuzzedWeight w(seed + 1000, FuzzOptions{});
      const auto rep = verify_intensity_identity(p, w, 1, {0.5, std::nullopt}, 2.5, 20000,
                                                 RandomSource(11, seed));
      CAPTURE(seed);
      CHECK(rep.pass);
    }
  }

  TEST_CASE("identity check demands enough trials") {
    const ZeroPolicy p;
    const ConstantWeight w(1.0);
    CHECK_THROWS(verify_intensity_identity(p, w, 0, {}, 1.0, 10, RandomSource(0, 0)));
  }

  TEST_CASE("fuzzed programs reject bad options") {
    FuzzOptions bad;
    bad.span = 0.0;
    CHECK_THROWS_AS(FuzzedProgram(1, bad), std::invalid_argument);
    bad = {};
    bad.max_breakpoints = 0;
    CHECK_THROWS_AS(FuzzedProgram(1, bad), std::invalid_argument);
  }
}
