#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "poisson_lab/random.hpp"
#include "poisson_lab/statistics.hpp"

using namespace poisson_lab;

TEST_SUITE("statistics") {
  TEST_CASE("bernoulli interval edge cases") {
    const auto zero = estimate_bernoulli(0, 1000);
    CHECK(zero.mean == 0.0);
    CHECK(zero.ci_low == 0.0);
    CHECK(zero.ci_high > 0.0);
    CHECK(zero.ci_high < 0.01);
    const auto all = estimate_bernoulli(1000, 1000);
    CHECK(all.ci_high == 1.0);
    CHECK(all.ci_low < 1.0);
    const auto half = estimate_bernoulli(500, 1000);
    CHECK(half.std_error == doctest::Approx(std::sqrt(0.25 / 1000)));
    CHECK(half.contains(0.5));
    CHECK(half.ci_high - half.ci_low == doctest::Approx(2 * kZ95 * half.std_error).epsilon(0.02));
    CHECK_THROWS(estimate_bernoulli(1, 0));
    CHECK_THROWS(estimate_bernoulli(5, 4));
  }

  TEST_CASE("bernoulli interval covers at least 95 percent for small p") {
    // Binomial draws from the standard library, independent of the project RNG.
    std::mt19937_64 gen(2024);
    struct Case {
      double p;
      std::uint64_t n;
    };
    for (const Case c : {Case{3.7e-5, 1'000'000}, Case{0.01, 1000}, Case{0.3, 200}}) {
      std::binomial_distribution<std::uint64_t> binom(c.n, c.p);
      int covered = 0;
      const int reps = 20000;
      for (int i = 0; i < reps; ++i) covered += estimate_bernoulli(binom(gen), c.n).contains(c.p);
      CAPTURE(c.p);
      CHECK(static_cast<double>(covered) / reps >= 0.95);
    }
  }

  TEST_CASE("estimate_mean of exponential(1) samples") {
    RandomSource rng(40, 0);
    std::vector<double> xs;
    for (int i = 0; i < 400000; ++i) xs.push_back(rng.exponential(1.0));
    const auto e = estimate_mean(xs);
    CHECK(std::abs(e.mean - 1.0) <= 4.0 * e.std_error);
    CHECK(e.std_error == doctest::Approx(1.0 / std::sqrt(400000.0)).epsilon(0.02));
    const std::vector<double> one = {1.0};
    CHECK_THROWS(estimate_mean(one));
  }

  TEST_CASE("running stats merge is associative and matches a single pass") {
    RandomSource rng(41, 0);
    std::vector<double> xs;
    for (int i = 0; i < 3000; ++i) xs.push_back(rng.uniform() * 10.0 - 3.0);
    RunningStats all, a, b, c;
    for (int i = 0; i < 3000; ++i) {
      all.add(xs[i]);
      (i < 1000 ? a : i < 2200 ? b : c).add(xs[i]);
    }
    RunningStats left = a, right = b;
    left.merge(b);
    left.merge(c);
    right.merge(c);
    RunningStats grouped = a;
    grouped.merge(right);
    for (const auto* s : {&left, &grouped}) {
      CHECK(s->count() == all.count());
      CHECK(s->mean() == doctest::Approx(all.mean()).epsilon(1e-12));
      CHECK(s->variance() == doctest::Approx(all.variance()).epsilon(1e-12));
      CHECK(s->min() == all.min());
      CHECK(s->max() == all.max());
    }
    // Two-pass oracle.
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    CHECK(all.mean() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(all.variance() == doctest::Approx(ss / (xs.size() - 1)).epsilon(1e-12));

    RunningStats empty;
    empty.merge(all);
    CHECK(empty.mean() == all.mean());
  }

  TEST_CASE("constant samples give a degenerate interval") {
    RunningStats s;
    for (int i = 0; i < 10; ++i) s.add(0.0);
    const auto e = s.to_estimate();
    CHECK(e.std_error == 0.0);
    CHECK(e.ci_low == 0.0);
    CHECK(e.ci_high == 0.0);
  }

  TEST_CASE("separation in sigmas") {
    const Estimate exact{10, 1.0, 0.0, 1.0, 1.0};
    CHECK(separation_in_sigmas(exact, 1.0, 0.0) == 0.0);
    CHECK(std::isinf(separation_in_sigmas(exact, 1.1, 0.0)));
    const Estimate noisy{10, 1.0, 0.3, 0.4, 1.6};
    CHECK(separation_in_sigmas(noisy, 1.0, 0.4) == 0.0);
    CHECK(separation_in_sigmas(noisy, 2.0, 0.4) == doctest::Approx(2.0));
  }

  TEST_CASE("average stderr of independent parts") {
    const std::vector<Estimate> parts = {{1, 0, 0.3, 0, 0}, {1, 0, 0.4, 0, 0}};
    CHECK(average_stderr(parts) == doctest::Approx(0.25));
  }

  TEST_CASE("chi-square accepts the true model and rejects a wrong one") {
    const std::vector<std::uint64_t> fair = {2510, 2490, 2475, 2525};
    const std::vector<double> quarter = {0.25, 0.25, 0.25, 0.25};
    const auto ok = chi_square_gof(fair, quarter);
    CHECK(ok.dof == 3);
    CHECK(ok.statistic == doctest::Approx((100.0 + 100.0 + 625.0 + 625.0) / 2500.0));
    CHECK(ok.p_value > 0.5);
    const std::vector<std::uint64_t> skewed = {3000, 2000, 2500, 2500};
    CHECK(chi_square_gof(skewed, quarter).p_value < 1e-10);
  }

  TEST_CASE("chi-square pools sparse tail cells") {
    const std::vector<std::uint64_t> obs = {500, 300, 150, 40, 8, 2};
    const std::vector<double> p = {0.5, 0.3, 0.15, 0.04, 0.008, 0.002};
    const auto r = chi_square_gof(obs, p);
    CHECK(r.dof == 4);
    CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("ks distance") {
    CHECK(ks_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(ks_distance({1, 2, 3}, {4, 5, 6}) == 1.0);
    CHECK(ks_distance({1, 3}, {2, 4}) == doctest::Approx(0.5));
  }

  TEST_CASE("random source is deterministic, uniform in (0,1] and derives distinct streams") {
    RandomSource a(7, 9), b(7, 9);
    for (int i = 0; i < 1000; ++i) CHECK(a() == b());
    CHECK(a.draws() == 1000);
    RandomSource u(1, 1);
    RunningStats s;
    for (int i = 0; i < 200000; ++i) {
      const double x = u.uniform();
      REQUIRE(x > 0.0);
      REQUIRE(x <= 1.0);
      s.add(x);
    }
    CHECK(std::abs(s.mean() - 0.5) <= 4.0 * std::sqrt(1.0 / 12 / 200000));
    RandomSource base(3, 4);
    CHECK(base.derive(1)() != base.derive(2)());
    CHECK(base.derive(1)() == base.derive(1)());
  }
}
