#include <algorithm>
#include <cmath>
#include <sstream>

#include "poisson_lab/harness/commands.hpp"
#include "poisson_lab/harness/montecarlo.hpp"
#include "poisson_lab/policies.hpp"

namespace poisson_lab::harness {
namespace {

constexpr std::uint64_t kFuzzStream = 0xf0221ULL;

std::string describe(const char* kind, double A, double horizon, double dark) {
  std::ostringstream os;
  os << kind << " A=" << A << " T=" << horizon << " dark=" << dark;
  return os.str();
}

VerifyCheck sigma_check(std::string suite, std::string name, const Estimate& lhs, const Estimate& rhs,
                        double sigmas) {
  VerifyCheck c;
  c.suite = std::move(suite);
  c.name = std::move(name);
  c.lhs = lhs.mean;
  c.lhs_stderr = lhs.std_error;
  c.rhs = rhs.mean;
  c.rhs_stderr = rhs.std_error;
  c.statistic = separation_in_sigmas(lhs, rhs.mean, rhs.std_error);
  c.threshold = sigmas;
  c.pass = c.statistic <= sigmas;
  c.detail = "|lhs - rhs| in combined stderr";
  return c;
}

VerifyCheck identity_check(const std::string& name, const EncoderPolicy& policy,
                           const WeightProcess& weight, const ChannelParams& params, double horizon,
                           const VerifyOptions& o, std::uint64_t stream) {
  const IdentityReport rep =
      verify_intensity_identity(policy, weight, 1, params, horizon, o.n_trials,
                                RandomSource(o.seed, stream), o.sigmas);
  VerifyCheck c = sigma_check("identity", name, rep.lhs, rep.rhs, o.sigmas);
  c.pass = rep.pass;
  c.detail = "E[sum C dY] vs E[int C (X + dark) dt]";
  return c;
}

// Random (policy parameters, horizon, dark current) for fuzz case i.
struct FuzzCase {
  std::uint64_t policy_seed;
  std::uint64_t weight_seed;
  double horizon;
  double dark_current;
};

FuzzCase fuzz_case(std::uint64_t seed, int i) {
  RandomSource rng = RandomSource(seed, kFuzzStream).derive(static_cast<std::uint64_t>(i));
  FuzzCase f;
  f.policy_seed = rng();
  f.weight_seed = rng();
  f.horizon = 0.5 + 3.5 * rng.uniform();
  constexpr double darks[] = {0.0, 0.5, 2.0};
  f.dark_current = darks[i % 3];
  return f;
}

}  // namespace

std::vector<std::string> available_suites() { return {"identity", "converse", "oracle", "substrate"}; }

std::vector<std::string> resolve_suites(std::span<const std::string> selector) {
  const auto all = available_suites();
  auto listing = [&] {
    std::string s;
    for (const auto& a : all) s += (s.empty() ? "" : ", ") + a;
    return s + ", all";
  };
  if (selector.empty()) throw ConfigError("verify: no suite selected; available suites: " + listing());
  std::vector<std::string> out;
  for (const auto& name : selector) {
    if (name == "all") {
      for (const auto& a : all) {
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
      }
      continue;
    }
    if (std::find(all.begin(), all.end(), name) == all.end()) {
      throw ConfigError("verify: unknown suite '" + name + "'; available suites: " + listing());
    }
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

std::vector<VerifyCheck> verify_identity_suite(const VerifyOptions& o) {
  std::vector<VerifyCheck> out;
  out.push_back(identity_check("constant a=1.5, C=1, dark=0.5, T=2", ConstantPolicy(1.5),
                               ConstantWeight(1.0), {0.5, std::nullopt}, 2.0, o, 1));
  out.push_back(identity_check("C=0", FuzzedPolicy(7, {}), ConstantWeight(0.0), {1.0, std::nullopt},
                               2.0, o, 2));
  out.push_back(identity_check("C=1{t<=T1^T}, A=1 until first count, T=3", UntilFirstCountPolicy(1.0),
                               UntilFirstCountWeight(3.0), {0.0, std::nullopt}, 3.0, o, 3));

  for (int i = 0; i < o.fuzz_count; ++i) {
    const FuzzCase f = fuzz_case(o.seed, i);
    FuzzOptions popt;
    popt.stop_at_first_count = i % 3 == 0;
    const FuzzedPolicy policy(f.policy_seed, popt);
    std::ostringstream name;
    name << "fuzz#" << i << (popt.stop_at_first_count ? " stop-first" : "") << " dark=" << f.dark_current
         << " T=" << f.horizon;
    const ChannelParams params{f.dark_current, std::nullopt};
    const std::uint64_t stream = 1000 + static_cast<std::uint64_t>(i);
    if (i % 5 == 0) {
      name << " C=1{t<=T1^T}";
      out.push_back(identity_check(name.str(), policy, UntilFirstCountWeight(f.horizon), params, f.horizon,
                                   o, stream));
    } else {
      name << " C=fuzz";
      out.push_back(identity_check(name.str(), policy, FuzzedWeight(f.weight_seed, {}), params, f.horizon,
                                   o, stream));
    }
  }
  return out;
}

std::vector<VerifyCheck> verify_converse_suite(const VerifyOptions& o) {
  std::vector<VerifyCheck> out;
  for (double A : {1.0, 10.0, 100.0}) {
    for (double T : {0.1, 1.0, 3.0}) {
      const MessageStats s = simulate_message(make_binary(A, T), 1, o.n_trials, o.seed);
      const Estimate p_err = s.p_err();
      Estimate correct = p_err;
      correct.mean = 1.0 - p_err.mean;
      VerifyCheck c = sigma_check("converse", describe("binary", A, T, 0.0), correct, s.energy_estimate(),
                                  o.sigmas);
      c.detail = "1 - p_err|1 vs E1";
      out.push_back(std::move(c));
    }
  }

  FuzzOptions popt;
  popt.stop_at_first_count = true;
  for (int i = 0; i < o.fuzz_count; ++i) {
    const FuzzCase f = fuzz_case(o.seed ^ 0xc0ULL, i);
    const FuzzedPolicy policy(f.policy_seed, popt);
    const ChannelParams params{0.0, std::nullopt};
    struct Acc {
      std::uint64_t trials = 0, counted = 0;
      RunningStats energy;
      void merge(const Acc& other) {
        trials += other.trials;
        counted += other.counted;
        energy.merge(other.energy);
      }
    };
    const std::uint64_t stream = 5000 + static_cast<std::uint64_t>(i);
    const Acc acc = run_chunked<Acc>(o.n_trials, [&](std::uint64_t begin, std::uint64_t end) {
      Acc a;
      for (std::uint64_t t = begin; t < end; ++t) {
        RandomSource rng = RandomSource(o.seed, stream).derive(t);
        const TrialResult r = run_trial(policy, 1, params, f.horizon, rng);
        ++a.trials;
        if (!r.timeline.empty()) ++a.counted;
        a.energy.add(r.energy);
      }
      return a;
    });
    std::ostringstream name;
    name << "fuzz#" << i << " stop-first T=" << f.horizon;
    VerifyCheck c = sigma_check("converse", name.str(), estimate_bernoulli(acc.counted, acc.trials),
                                acc.energy.to_estimate(), o.sigmas);
    c.detail = "P(count in [0,T]) vs E[energy]";
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<VerifyCheck> verify_oracle_suite(const VerifyOptions& o) {
  std::vector<VerifyCheck> out;
  auto check_point = [&](const SchemeSpec& spec) {
    const auto cf = closed_form(spec);
    const Scheme scheme = make_scheme(spec);
    for (MessageId m = 0; m < spec.M; ++m) {
      const MessageStats s = simulate_message(scheme, m, o.oracle_trials, o.seed);
      const auto idx = static_cast<std::size_t>(m);
      const std::string base = describe(to_string(spec.kind).data(), spec.A, spec.horizon, spec.dark_current) +
                               " M=" + std::to_string(spec.M) + " msg=" + std::to_string(m);
      const std::pair<const char*, std::pair<Estimate, double>> stats[] = {
          {" p_err", {s.p_err(kZ999), cf->p_err_given[idx]}},
          {" energy", {s.energy_estimate(kZ999), cf->energy_given[idx]}},
      };
      for (const auto& [suffix, pair] : stats) {
        const auto& [est, truth] = pair;
        VerifyCheck c;
        c.suite = "oracle";
        c.name = base + suffix;
        c.lhs = est.mean;
        c.lhs_stderr = est.std_error;
        c.rhs = truth;
        c.statistic = est.contains(truth) ? 0.0 : 1.0;
        c.threshold = 0.0;
        c.pass = est.contains(truth);
        std::ostringstream d;
        d << "closed form inside 99.9% interval [" << est.ci_low << ", " << est.ci_high << "]";
        c.detail = d.str();
        out.push_back(std::move(c));
      }
    }
  };
  for (double A : {1.0, 10.0, 100.0}) {
    for (double h : {0.1, 1.0, 3.0}) {
      for (double dark : {0.0, 0.5, 2.0}) {
        if (dark == 0.0) {
          check_point({SchemeKind::BinaryZeroDark, 2, A, h, 0.0});
          check_point({SchemeKind::MaryZeroDark, 4, A, h, 0.0});
        } else {
          check_point({SchemeKind::BinaryDarkWindow, 2, A, h, dark});
        }
      }
    }
  }
  return out;
}

std::vector<VerifyCheck> verify_substrate_suite(const VerifyOptions& o) {
  std::vector<VerifyCheck> out;
  constexpr double kSignificance = 0.001;
  const std::pair<double, double> points[] = {{1.0, 1.0}, {2.0, 10.0}, {0.1, 5.0}};
  std::uint64_t stream = 0;
  for (const auto& [rate, T] : points) {
    const double mean = rate * T;
    std::vector<std::uint64_t> hist;
    for (std::uint64_t i = 0; i < o.n_trials; ++i) {
      RandomSource rng(o.seed, (++stream << 32) | 0x5ULL);
      const std::size_t k = sample_homogeneous(rate, T, rng).size();
      if (k >= hist.size()) hist.resize(k + 1, 0);
      ++hist[k];
    }
    // The last cell takes the whole upper tail.
    std::vector<double> probs(hist.size());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < hist.size(); ++k) acc += probs[k] = poisson_pmf(mean, static_cast<long long>(k));
    probs.back() = std::max(0.0, 1.0 - acc);
    const ChiSquareResult chi = chi_square_gof(hist, probs);

    VerifyCheck c;
    c.suite = "substrate";
    std::ostringstream name;
    name << "chi-square counts rate=" << rate << " T=" << T;
    c.name = name.str();
    c.lhs = chi.p_value;
    c.rhs = kSignificance;
    c.statistic = chi.p_value;
    c.threshold = kSignificance;
    c.pass = chi.p_value >= kSignificance;
    c.detail = "p-value of chi2=" + format_double(chi.statistic) + " on " + std::to_string(chi.dof) + " dof";
    out.push_back(std::move(c));
  }

  {
    RunningStats first;
    for (std::uint64_t i = 0; i < o.oracle_trials; ++i) {
      RandomSource rng(o.seed, 0xf1f5ULL << 40 | i);
      first.add(*sample_next_event(0.0, {2.0, std::numeric_limits<double>::infinity()}, rng));
    }
    Estimate truth;
    truth.mean = 0.5;
    VerifyCheck c = sigma_check("substrate", "first count mean, rate 2", first.to_estimate(), truth, o.sigmas);
    c.detail = "sample mean vs 1/A";
    out.push_back(std::move(c));
  }

  {
    // Restarting the exponential clock at s must not change the law.
    constexpr double rate = 1.0, split = 0.7, end = 3.0;
    std::vector<double> one_stage, two_stage;
    for (std::uint64_t i = 0; i < o.n_trials; ++i) {
      RandomSource a(o.seed, 0xa1ULL << 40 | i);
      RandomSource b(o.seed, 0xb2ULL << 40 | i);
      one_stage.push_back(sample_next_event(0.0, {rate, end}, a).value_or(end));
      auto t = sample_next_event(0.0, {rate, split}, b);
      if (!t) t = sample_next_event(split, {rate, end}, b);
      two_stage.push_back(t.value_or(end));
    }
    VerifyCheck c;
    c.suite = "substrate";
    c.name = "memorylessness two-stage vs one-stage";
    c.statistic = ks_distance(std::move(one_stage), std::move(two_stage));
    c.lhs = c.statistic;
    // Asymptotic two-sample KS critical value at significance 0.001.
    const double n = static_cast<double>(o.n_trials);
    c.threshold = std::sqrt(-0.5 * std::log(0.0005)) * std::sqrt(2.0 / n);
    c.rhs = c.threshold;
    c.pass = c.statistic < c.threshold;
    c.detail = "two-sample KS distance vs 0.001 critical value";
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<VerifyCheck> cmd_verify(std::span<const std::string> suites, const VerifyOptions& options) {
  const auto selected = resolve_suites(suites);
  if (options.n_trials < 1000 || options.oracle_trials < 2) {
    throw ConfigError("verify: trials must be >= 1000");
  }
  if (options.fuzz_count < 0) throw ConfigError("verify: fuzz count must be >= 0");
  std::vector<VerifyCheck> out;
  for (const auto& s : selected) {
    std::vector<VerifyCheck> part;
    if (s == "identity") part = verify_identity_suite(options);
    if (s == "converse") part = verify_converse_suite(options);
    if (s == "oracle") part = verify_oracle_suite(options);
    if (s == "substrate") part = verify_substrate_suite(options);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Table verify_table(std::span<const VerifyCheck> checks) {
  Table t;
  t.header = {"suite", "check", "lhs", "lhs_stderr", "rhs", "rhs_stderr",
              "statistic", "threshold", "pass", "detail"};
  for (const auto& c : checks) {
    t.rows.push_back({c.suite, c.name, c.lhs, c.lhs_stderr, c.rhs, c.rhs_stderr, c.statistic, c.threshold,
                      c.pass, c.detail});
  }
  return t;
}

}  // namespace poisson_lab::harness
