#include <cmath>
#include <sstream>

#include "poisson_lab/harness/commands.hpp"
#include "poisson_lab/harness/montecarlo.hpp"

namespace poisson_lab::harness {
namespace {

ReportRow make_row(const ExperimentConfig& config, std::string message, std::uint64_t n,
                   const Estimate& p_err, const Estimate& energy) {
  ReportRow row;
  row.kind = std::string(to_string(config.scheme.kind));
  row.M = config.scheme.M;
  row.A = config.scheme.A;
  row.horizon = config.scheme.horizon;
  row.dark_current = config.scheme.dark_current;
  row.message = std::move(message);
  row.n_trials = n;
  row.p_err = p_err;
  row.energy = energy;
  row.seed = config.seed;
  return row;
}

void set_axis_value(ExperimentConfig& config, const std::string& name, double v) {
  if (name == "A") {
    config.scheme.A = v;
  } else if (name == "horizon") {
    config.scheme.horizon = v;
  } else if (name == "dark_current") {
    config.scheme.dark_current = v;
  } else if (name == "M") {
    if (v != std::floor(v) || v < 2 || v > 1e6) throw ConfigError("axis M: values must be integers >= 2");
    config.scheme.M = static_cast<int>(v);
  } else {
    throw ConfigError("axis: unknown parameter '" + name + "' (expected A, horizon, dark_current or M)");
  }
}

std::vector<double> spaced(const std::string& how, double a, double b, int count) {
  if (count < 1) throw ConfigError("axis: point count must be >= 1");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    if (how == "lin") {
      out.push_back(a + f * (b - a));
    } else {
      if (!(a > 0.0 && b > 0.0)) throw ConfigError("axis: log spacing needs positive bounds");
      out.push_back(std::exp(std::log(a) + f * (std::log(b) - std::log(a))));
    }
  }
  if (count > 1) out.back() = b;
  return out;
}

}  // namespace

std::vector<ReportRow> cmd_simulate(const ExperimentConfig& config) {
  config.validate();
  const Scheme scheme = make_scheme(config.scheme);
  const auto cf = closed_form(config.scheme);

  std::vector<MessageId> messages = config.messages;
  const bool all = messages.empty();
  if (all) {
    for (MessageId m = 0; m < config.scheme.M; ++m) messages.push_back(m);
  }

  std::vector<ReportRow> rows;
  std::vector<MessageStats> stats;
  for (MessageId m : messages) {
    stats.push_back(simulate_message(scheme, m, config.n_trials, config.seed));
    const auto& s = stats.back();
    ReportRow row = make_row(config, std::to_string(m), s.trials, s.p_err(), s.energy_estimate());
    if (cf) {
      row.cf_p_err = cf->p_err_given[static_cast<std::size_t>(m)];
      row.cf_energy = cf->energy_given[static_cast<std::size_t>(m)];
    }
    rows.push_back(std::move(row));
  }
  if (all) {
    const AverageStats avg = average_over_messages(stats);
    ReportRow row = make_row(config, "avg", avg.p_err.n, avg.p_err, avg.energy);
    if (cf) {
      row.cf_p_err = cf->p_err_avg;
      row.cf_energy = cf->energy_avg;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

SweepAxis parse_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("axis: expected NAME=VALUES, got '" + std::string(text) + "'");
  }
  SweepAxis axis;
  axis.name = std::string(text.substr(0, eq));
  const std::string spec(text.substr(eq + 1));
  if (spec.empty()) throw ConfigError("axis " + axis.name + ": empty grid");

  if (spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 4) throw ConfigError("axis " + axis.name + ": expected lin|log:START:STOP:COUNT");
    axis.values = spaced(parts[0], parse_double(parts[1], "axis " + axis.name),
                         parse_double(parts[2], "axis " + axis.name),
                         parse_int(parts[3], "axis " + axis.name));
  } else {
    std::stringstream ss(spec);
    for (std::string v; std::getline(ss, v, ',');) {
      if (v.empty()) throw ConfigError("axis " + axis.name + ": empty value in '" + spec + "'");
      axis.values.push_back(parse_double(v, "axis " + axis.name));
    }
  }
  if (axis.values.empty()) throw ConfigError("axis " + axis.name + ": empty grid");
  return axis;
}

std::vector<ReportRow> cmd_sweep(const ExperimentConfig& config, std::span<const SweepAxis> axes) {
  if (axes.empty() || axes.size() > 2) throw ConfigError("sweep: give one or two axes");
  std::size_t points = 1;
  for (const auto& a : axes) {
    if (a.values.empty()) throw ConfigError("axis " + a.name + ": empty grid");
    points *= a.values.size();
    if (points > kMaxSweepPoints) {
      throw ConfigError("sweep: grid exceeds " + std::to_string(kMaxSweepPoints) + " points");
    }
  }
  if (axes.size() == 2 && axes[0].name == axes[1].name) {
    throw ConfigError("sweep: both axes vary '" + axes[0].name + "'");
  }

  // Build and validate every point before running any of them.
  std::vector<ExperimentConfig> grid;
  grid.reserve(points);
  const std::size_t inner = axes.size() == 2 ? axes[1].values.size() : 1;
  for (std::size_t i = 0; i < points; ++i) {
    ExperimentConfig c = config;
    set_axis_value(c, axes[0].name, axes[0].values[i / inner]);
    if (axes.size() == 2) set_axis_value(c, axes[1].name, axes[1].values[i % inner]);
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("sweep point " + std::to_string(i) + ": " + e.what());
    }
    grid.push_back(std::move(c));
  }

  std::vector<ReportRow> rows;
  for (const auto& c : grid) {
    auto part = cmd_simulate(c);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace poisson_lab::harness
