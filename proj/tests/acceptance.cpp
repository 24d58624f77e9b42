// acceptance.cpp -- end-to-end acceptance checks at full trial counts.
//
// Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "poisson_lab/harness/commands.hpp"

using namespace poisson_lab;
using namespace poisson_lab::harness;

namespace {

constexpr std::uint64_t kTrials = 1'000'000;

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const ReportRow& row(const std::vector<ReportRow>& rows, const std::string& message) {
  for (const auto& r : rows) {
    if (r.message == message) return r;
  }
  throw std::runtime_error("no row for message " + message);
}

ExperimentConfig config(SchemeSpec spec, std::uint64_t seed = 0) {
  ExperimentConfig c;
  c.scheme = spec;
  c.n_trials = kTrials;
  c.seed = seed;
  return c;
}

const SchemeSpec kOneBit{SchemeKind::BinaryZeroDark, 2, 10.0, 5.0, 0.0};

std::string csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  write_csv(out, to_table(rows));
  return out.str();
}

bool energy_near(const ReportRow& avg, double target) {
  return separation_in_sigmas(avg.energy, target, 0.0) <= kPassSigmas;
}

void one_bit() {
  const auto rows = cmd_simulate(config(kOneBit));
  const auto& avg = row(rows, "avg");
  const double target = -std::expm1(-50.0) / 2.0;
  const bool pass = energy_near(avg, target) && avg.p_err.mean < 1e-5;
  report(1, pass,
         fmt("binary A=10 T=5: energy_avg=%.6f se=%.2e target=%.6f, p_err_avg=%.2e (< 1e-5)",
             avg.energy.mean, avg.energy.std_error, target, avg.p_err.mean));
}

void dark_floor() {
  FrontierQuery q;
  q.target_error = 0.02;
  q.dark_current = 1.0;
  q.n_trials = kTrials;
  const auto r = cmd_frontier(q);
  const bool in_range = r.feasible && r.energy_avg >= 0.48 && r.energy_avg <= 0.51;
  const bool pass = in_range && r.certificate_pass && r.mc_energy.has_value();
  report(2, pass,
         fmt("frontier eps=0.02 dark=1: energy_avg=%.6f in [0.48, 0.51], A=%g window=%.4g, "
             "mc energy=%.6f mc p_err=%.5f, certificate=%s",
             r.energy_avg, r.spec ? r.spec->A : 0.0, r.spec ? r.spec->horizon : 0.0,
             r.mc_energy ? r.mc_energy->mean : NAN, r.mc_p_err ? r.mc_p_err->mean : NAN,
             r.certificate_pass ? "yes" : "no"));
}

void mary_energy() {
  bool pass = true;
  std::string what;
  for (int M : {4, 2, 8}) {
    const SchemeSpec spec = M == 2 ? kOneBit : SchemeSpec{SchemeKind::MaryZeroDark, M, 100.0, 3.0, 0.0};
    const auto rows = cmd_simulate(config(spec));
    const auto& avg = row(rows, "avg");
    const double slot = spec.horizon / (M - 1);
    const double target = (M - 1.0) / M * -std::expm1(-spec.A * slot);
    bool ok = energy_near(avg, target);
    if (M == 2) ok = ok && avg.p_err.mean < 1e-5;
    pass = pass && ok;
    what += fmt("M=%d energy_avg=%.6f target=%.6f (%.2f se)%s; ", M, avg.energy.mean, target,
                separation_in_sigmas(avg.energy, target, 0.0), ok ? "" : " FAIL");
  }
  report(3, pass, what);
}

void spurious_count() {
  ExperimentConfig c = config({SchemeKind::BinaryDarkWindow, 2, 1e4, 0.01, 1.0});
  c.messages = {0};
  const std::vector<SweepAxis> axes = {{"horizon", {0.001, 0.01, 0.1}}};
  const auto rows = cmd_sweep(c, axes);
  bool pass = rows.size() == 3;
  std::string what;
  for (const auto& r : rows) {
    const double target = -std::expm1(-r.horizon);
    const double sep = separation_in_sigmas(r.p_err, target, 0.0);
    pass = pass && sep <= kPassSigmas;
    what += fmt("window=%g p_err|0=%.6f target=%.6f (%.2f se); ", r.horizon, r.p_err.mean, target, sep);
  }
  report(4, pass, what);
}

std::string summarize(const std::vector<VerifyCheck>& checks, bool& pass) {
  pass = !checks.empty();
  int failed = 0;
  double worst = 0.0;
  for (const auto& c : checks) {
    if (!c.pass) ++failed;
    if (c.threshold == kPassSigmas) worst = std::max(worst, c.statistic);
    pass = pass && c.pass;
  }
  return fmt("%zu checks, %d failed, worst separation %.2f se", checks.size(), failed, worst);
}

void converse() {
  VerifyOptions o;
  o.n_trials = 100'000;
  o.fuzz_count = 50;
  bool pass = false;
  const auto s = summarize(verify_converse_suite(o), pass);
  report(5, pass, "verify converse (binary grid + 50 fuzzed stop-at-first-count policies, n=1e5): " + s);
}

void identity() {
  VerifyOptions o;
  o.n_trials = 100'000;
  o.fuzz_count = 50;
  bool pass = false;
  const auto checks = verify_identity_suite(o);
  const auto s = summarize(checks, pass);
  report(6, pass, "verify identity (fixed cases incl. first-count indicator + 50 fuzzed pairs, n=1e5): " + s);
}

void substrate() {
  VerifyOptions o;
  o.n_trials = 100'000;
  o.oracle_trials = kTrials;
  const auto checks = verify_substrate_suite(o);
  bool pass = !checks.empty();
  std::string what;
  for (const auto& c : checks) {
    pass = pass && c.pass;
    what += fmt("%s stat=%.4g thr=%.4g %s; ", c.name.c_str(), c.statistic, c.threshold, c.pass ? "ok" : "FAIL");
  }
  report(7, pass, what);
}

void reproducibility() {
  const std::string first = csv(cmd_simulate(config(kOneBit)));
  const std::string second = csv(cmd_simulate(config(kOneBit)));
  const bool identical = first == second;

  std::vector<Estimate> energy, p_err;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rows = cmd_simulate(config(kOneBit, seed));
    energy.push_back(row(rows, "avg").energy);
    p_err.push_back(row(rows, "avg").p_err);
  }
  auto overlap = [](const std::vector<Estimate>& v) {
    double lo = -INFINITY, hi = INFINITY;
    for (const auto& e : v) {
      lo = std::max(lo, e.ci_low);
      hi = std::min(hi, e.ci_high);
    }
    return std::pair{lo <= hi, hi - lo};
  };
  const auto [e_ok, e_gap] = overlap(energy);
  const auto [p_ok, p_gap] = overlap(p_err);
  const bool pass = identical && e_ok && p_ok;
  report(8, pass,
         fmt("same-seed CSV identical=%s (%zu bytes); 10 seeds: energy CIs overlap=%s (common width %.2e), "
             "p_err CIs overlap=%s",
             identical ? "yes" : "no", first.size(), e_ok ? "yes" : "no", e_gap, p_ok ? "yes" : "no"));
}

}  // namespace

int main() {
  try {
    one_bit();
    dark_floor();
    mary_energy();
    spurious_count();
    converse();
    identity();
    substrate();
    reproducibility();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
