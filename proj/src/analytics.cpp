#include "poisson_lab/analytics.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <string>
#include <stdexcept>

namespace poisson_lab {
namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite and > 0");
  }
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
  }
}

void require_messages(int m) {
  if (m < 2) throw std::invalid_argument("message count M must be >= 2");
}

// 1 - e^{-x} without cancellation for small x.
double one_minus_exp_neg(double x) { return -std::expm1(-x); }

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

PerfReport finish(std::vector<double> p_err, std::vector<double> energy) {
  PerfReport r;
  r.p_err_avg = mean_of(p_err);
  r.energy_avg = mean_of(energy);
  r.p_err_given = std::move(p_err);
  r.energy_given = std::move(energy);
  return r;
}

}  // namespace

PerfReport closed_form_binary(double power, double horizon) {
  return closed_form_mary(2, power, horizon);
}

PerfReport closed_form_binary_dark(double power, double window, double dark_current) {
  require_positive(power, "A");
  require_positive(window, "window");
  require_nonnegative(dark_current, "dark current");
  const double total = power + dark_current;
  const double miss = std::exp(-total * window);
  // A * E[min(T1, window)] with T1 ~ Exp(A + dark).
  const double energy = power * one_minus_exp_neg(total * window) / total;
  return finish({one_minus_exp_neg(dark_current * window), miss}, {0.0, energy});
}

PerfReport closed_form_mary(int messages, double power, double horizon) {
  require_messages(messages);
  require_positive(power, "A");
  require_positive(horizon, "horizon");
  const double slot = horizon / static_cast<double>(messages - 1);
  const double miss = std::exp(-power * slot);
  const double energy = one_minus_exp_neg(power * slot);
  std::vector<double> p_err(static_cast<std::size_t>(messages), miss);
  std::vector<double> energies(static_cast<std::size_t>(messages), energy);
  p_err[0] = 0.0;
  energies[0] = 0.0;
  return finish(std::move(p_err), std::move(energies));
}

double mary_dark_error_bound(int messages, double power, double window, double dark_current) {
  require_messages(messages);
  require_positive(power, "A");
  require_positive(window, "window");
  require_nonnegative(dark_current, "dark current");
  const double slot = window / static_cast<double>(messages - 1);
  return std::min(1.0, one_minus_exp_neg(dark_current * window) + std::exp(-power * slot));
}

double converse_energy_bound(int messages) {
  require_messages(messages);
  return static_cast<double>(messages - 1) / static_cast<double>(messages);
}

double energy_floor_at_error(int messages, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0, 1]");
  return std::max(0.0, converse_energy_bound(messages) - eps);
}

}  // namespace poisson_lab
