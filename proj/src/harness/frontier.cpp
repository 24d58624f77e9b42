#include <algorithm>
#include <cmath>
#include <limits>

#include "poisson_lab/harness/commands.hpp"
#include "poisson_lab/harness/montecarlo.hpp"

namespace poisson_lab::harness {
namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  if (lo == hi || count <= 1) return {lo};
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    out.push_back(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

SchemeKind family(const FrontierQuery& q) {
  if (q.dark_current == 0.0) return q.M == 2 ? SchemeKind::BinaryZeroDark : SchemeKind::MaryZeroDark;
  return q.M == 2 ? SchemeKind::BinaryDarkWindow : SchemeKind::MaryDarkWindow;
}

SchemeSpec point(const FrontierQuery& q, double A, double horizon) {
  return {family(q), q.M, A, horizon, q.dark_current};
}

// Horizon minimizing the average error for a fixed power. Without dark
// current more time always helps; with it, the spurious-count term grows
// while the miss term shrinks, and (1 - e^{-ld}) + e^{-(A+l)d} is minimized
// where l e^{-ld} = (A + l) e^{-(A+l)d}.
double best_horizon(const FrontierQuery& q, double A) {
  if (q.dark_current == 0.0) return q.horizon_max;
  const double l = q.dark_current;
  return std::clamp(std::log((A + l) / l) / A, q.horizon_min, q.horizon_max);
}

struct Candidate {
  SchemeSpec spec;
  PerfReport cf;
};

// Least-energy closed-form point: for each power, the shortest feasible
// horizon (energy grows with the horizon), then the best power.
std::optional<Candidate> closed_form_search(const FrontierQuery& q) {
  std::optional<Candidate> best;
  for (double A : log_grid(q.A_min, q.A_max, q.A_grid)) {
    auto p_err = [&](double h) { return closed_form(point(q, A, h))->p_err_avg; };
    const double h_best = best_horizon(q, A);
    if (p_err(h_best) > q.target_error) continue;

    double hi = h_best;
    if (p_err(q.horizon_min) <= q.target_error) {
      hi = q.horizon_min;
    } else {
      double lo = q.horizon_min;  // infeasible end
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (p_err(mid) <= q.target_error ? hi : lo) = mid;
      }
    }
    Candidate c{point(q, A, hi), *closed_form(point(q, A, hi))};
    if (!best || c.cf.energy_avg < best->cf.energy_avg) best = std::move(c);
  }
  return best;
}

}  // namespace

void FrontierQuery::validate() const {
  if (!(target_error > 0.0 && target_error < 1.0)) throw ConfigError("target_error: must lie strictly inside (0, 1)");
  if (!(dark_current >= 0.0) || !std::isfinite(dark_current)) throw ConfigError("dark_current: must be finite and >= 0");
  if (M < 2) throw ConfigError("M: must be >= 2");
  if (!(A_min > 0.0 && A_min <= A_max && std::isfinite(A_max))) {
    throw ConfigError("A range: need 0 < A_min <= A_max < inf");
  }
  if (!(horizon_min > 0.0 && horizon_min <= horizon_max && std::isfinite(horizon_max))) {
    throw ConfigError("horizon range: need 0 < horizon_min <= horizon_max < inf");
  }
  if (n_trials < 2) throw ConfigError("trials: frontier certificates need >= 2 trials");
  if (A_grid < 1 || mc_A_grid < 1 || mc_horizon_grid < 1) throw ConfigError("grid sizes must be >= 1");
}

FrontierResult cmd_frontier(const FrontierQuery& q) {
  q.validate();
  FrontierResult r;
  r.converse_floor = converse_energy_bound(q.M);
  r.floor_at_target = energy_floor_at_error(q.M, q.target_error);

  // Guessing message 0 without transmitting errs with probability (M-1)/M.
  if (q.target_error >= r.converse_floor) {
    r.feasible = true;
    r.method = "blind-guess";
    r.energy_avg = 0.0;
    r.p_err_avg = r.converse_floor;
    r.certificate_pass = true;
    r.note = "all-zero encoder with a constant decoder meets the target";
    return r;
  }

  const SchemeKind kind = family(q);
  if (kind != SchemeKind::MaryDarkWindow) {
    r.method = "closed-form";
    const auto best = closed_form_search(q);
    if (!best) {
      r.note = "no (A, horizon) in the given ranges meets the target error";
      return r;
    }
    r.feasible = true;
    r.spec = best->spec;
    r.energy_avg = best->cf.energy_avg;
    r.p_err_avg = best->cf.p_err_avg;

    const SchemeStats mc = simulate_scheme(make_scheme(best->spec), q.n_trials, q.seed);
    r.mc_energy = mc.average.energy;
    r.mc_p_err = mc.average.p_err;
    const double s = kPassSigmas;
    r.certificate_pass =
        separation_in_sigmas(*r.mc_energy, r.energy_avg, 0.0) <= s &&
        separation_in_sigmas(*r.mc_p_err, r.p_err_avg, 0.0) <= s &&
        r.mc_p_err->mean - s * r.mc_p_err->std_error <= q.target_error &&
        r.mc_energy->mean + s * r.mc_energy->std_error >= r.floor_at_target;
    return r;
  }

  // M-ary with dark current: no closed form, so probe by simulation. Exact
  // lower bounds on the average error prune hopeless probes: message 0 errs
  // on any spurious count, a nonzero message errs if its slot stays empty.
  r.method = "monte-carlo";
  const double l = q.dark_current;
  const double m = static_cast<double>(q.M);
  for (double A : log_grid(q.A_min, q.A_max, q.mc_A_grid)) {
    for (double h : log_grid(q.horizon_min, q.horizon_max, q.mc_horizon_grid)) {
      const double slot = h / (m - 1.0);
      const double lower = std::max(-std::expm1(-l * h) / m, (m - 1.0) / m * std::exp(-(A + l) * slot));
      if (lower > q.target_error) continue;
      const SchemeSpec spec = point(q, A, h);
      const SchemeStats mc = simulate_scheme(make_scheme(spec), q.n_trials, q.seed);
      if (mc.average.p_err.ci_high > q.target_error) continue;
      if (!r.feasible || mc.average.energy.mean < r.energy_avg) {
        r.feasible = true;
        r.spec = spec;
        r.energy_avg = mc.average.energy.mean;
        r.p_err_avg = mc.average.p_err.mean;
        r.mc_energy = mc.average.energy;
        r.mc_p_err = mc.average.p_err;
      }
    }
  }
  if (!r.feasible) {
    r.note = "no probed (A, horizon) has a 95% error upper bound below the target";
    return r;
  }
  r.certificate_pass = r.mc_energy->mean + kPassSigmas * r.mc_energy->std_error >= r.floor_at_target;
  return r;
}

Table frontier_table(const FrontierQuery& q, const FrontierResult& r) {
  Table t;
  t.header = {"kind",        "M",          "dark_current", "target_error", "feasible",
              "method",      "A",          "horizon",      "energy_avg",   "p_err_avg",
              "mc_energy",   "mc_energy_lo", "mc_energy_hi", "mc_p_err",   "mc_p_err_lo",
              "mc_p_err_hi", "converse_floor", "floor_at_target", "certificate", "n_trials",
              "seed",        "note"};
  auto opt = [](const std::optional<Estimate>& e, double Estimate::*field) -> Cell {
    if (e) return (*e).*field;
    return std::monostate{};
  };
  std::vector<Cell> row;
  row.emplace_back(r.spec ? std::string(to_string(r.spec->kind)) : std::string(to_string(family(q))));
  row.emplace_back(static_cast<std::int64_t>(q.M));
  row.emplace_back(q.dark_current);
  row.emplace_back(q.target_error);
  row.emplace_back(r.feasible);
  row.emplace_back(r.method);
  row.emplace_back(r.spec ? Cell{r.spec->A} : Cell{});
  row.emplace_back(r.spec ? Cell{r.spec->horizon} : Cell{});
  row.emplace_back(r.feasible ? Cell{r.energy_avg} : Cell{});
  row.emplace_back(r.feasible ? Cell{r.p_err_avg} : Cell{});
  row.emplace_back(opt(r.mc_energy, &Estimate::mean));
  row.emplace_back(opt(r.mc_energy, &Estimate::ci_low));
  row.emplace_back(opt(r.mc_energy, &Estimate::ci_high));
  row.emplace_back(opt(r.mc_p_err, &Estimate::mean));
  row.emplace_back(opt(r.mc_p_err, &Estimate::ci_low));
  row.emplace_back(opt(r.mc_p_err, &Estimate::ci_high));
  row.emplace_back(r.converse_floor);
  row.emplace_back(r.floor_at_target);
  row.emplace_back(r.certificate_pass);
  row.emplace_back(q.n_trials);
  row.emplace_back(q.seed);
  row.emplace_back(r.note);
  t.rows.push_back(std::move(row));
  return t;
}

}  // namespace poisson_lab::harness
