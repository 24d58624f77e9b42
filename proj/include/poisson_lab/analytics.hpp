// analytics.hpp -- closed-form performance of the stop-at-first-count schemes
// and the minimum-energy floor they are measured against.
//
// Energies are in photons (expected transmitted counts). Messages are
// equiprobable, so averages are plain means over the per-message lists.
#pragma once

#include <vector>

#include "poisson_lab/statistics.hpp"

namespace poisson_lab {

struct PerfReport {
  std::vector<double> p_err_given;
  std::vector<double> energy_given;
  double p_err_avg = 0.0;
  double energy_avg = 0.0;
};

/// Binary scheme without dark current: silence for 0, power A until the first
/// count for 1, decoder "any count means 1".
PerfReport closed_form_binary(double power, double horizon);

/// The same scheme on a short window with dark current. Message 0 errs on a
/// spurious count; message 1 errs when the combined rate A + dark leaves the
/// window empty.
PerfReport closed_form_binary_dark(double power, double window, double dark_current);

/// M-ary slot scheme without dark current; each nonzero message owns a slot
/// of length horizon / (M - 1).
PerfReport closed_form_mary(int messages, double power, double horizon);

/// Union bound on every per-message error of the M-ary slot scheme with dark
/// current: P(spurious count in the window) + P(no count in a slot).
double mary_dark_error_bound(int messages, double power, double window, double dark_current);

/// Least average energy of any reliable scheme for M equiprobable messages:
/// (M - 1) / M photons.
double converse_energy_bound(int messages);

/// Least average energy at average error probability eps for zero-silent,
/// count-detecting schemes: (M - 1) / M - eps, floored at zero.
double energy_floor_at_error(int messages, double eps);

}  // namespace poisson_lab
