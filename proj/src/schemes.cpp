#include "poisson_lab/schemes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace poisson_lab {

std::string_view to_string(SchemeKind kind) noexcept {
  switch (kind) {
    case SchemeKind::BinaryZeroDark: return "binary-zero-dark";
    case SchemeKind::BinaryDarkWindow: return "binary-dark-window";
    case SchemeKind::MaryZeroDark: return "mary-zero-dark";
    case SchemeKind::MaryDarkWindow: return "mary-dark-window";
  }
  return "unknown";
}

std::optional<SchemeKind> parse_scheme_kind(std::string_view name) noexcept {
  if (name == "binary-zero-dark" || name == "binary") return SchemeKind::BinaryZeroDark;
  if (name == "binary-dark-window" || name == "binary-dark") return SchemeKind::BinaryDarkWindow;
  if (name == "mary-zero-dark" || name == "mary") return SchemeKind::MaryZeroDark;
  if (name == "mary-dark-window" || name == "mary-dark") return SchemeKind::MaryDarkWindow;
  return std::nullopt;
}

bool is_dark_window(SchemeKind kind) noexcept {
  return kind == SchemeKind::BinaryDarkWindow || kind == SchemeKind::MaryDarkWindow;
}

bool is_binary(SchemeKind kind) noexcept {
  return kind == SchemeKind::BinaryZeroDark || kind == SchemeKind::BinaryDarkWindow;
}

void SchemeSpec::validate() const {
  auto bad = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument(field + ": " + why);
  };
  if (is_binary(kind) && M != 2) bad("M", "binary schemes require M = 2");
  if (M < 2) bad("M", "must be >= 2");
  if (!(A > 0.0) || !std::isfinite(A)) bad("A", "must be finite and > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) bad("horizon", "must be finite and > 0");
  if (!(dark_current >= 0.0) || !std::isfinite(dark_current)) {
    bad("dark_current", "must be finite and >= 0");
  }
  if (!is_dark_window(kind) && dark_current != 0.0) {
    bad("dark_current", std::string(to_string(kind)) + " requires zero dark current");
  }
}

DarkWindowDefaults default_dark_window(double dark_current) {
  if (!(dark_current >= 0.0)) throw std::invalid_argument("dark current must be >= 0");
  return {1e4, dark_current > 0.0 ? 1e-2 / dark_current : 1e-2};
}

double slot_boundary(int messages, double horizon, int k) noexcept {
  if (k >= messages - 1) return horizon;
  return horizon * static_cast<double>(k) / static_cast<double>(messages - 1);
}

SlotPolicy::SlotPolicy(int messages, double power, double horizon)
    : messages_(messages), power_(power), horizon_(horizon) {}

RateSegment SlotPolicy::query(MessageId message, double now, const Timeline& history,
                              RandomSource&) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (message < 0 || message >= messages_) {
    throw std::invalid_argument("message " + std::to_string(message) + " out of range");
  }
  if (message == 0 || !history.empty()) return {0.0, inf};
  const double start = slot_boundary(messages_, horizon_, message - 1);
  const double end = slot_boundary(messages_, horizon_, message);
  if (now < start) return {0.0, start};
  if (now < end) return {power_, end};
  return {0.0, inf};
}

MessageId decode_first_count_slot(const Timeline& timeline, int messages) {
  const auto first = timeline.first();
  if (!first) return 0;
  for (int m = 1; m < messages - 1; ++m) {
    if (*first <= slot_boundary(messages, timeline.horizon(), m)) return m;
  }
  return messages - 1;
}

ChannelParams Scheme::channel() const { return {spec.dark_current, spec.A}; }

TrialResult Scheme::run(MessageId message, RandomSource& rng) const {
  TrialResult r = run_trial(*encoder, message, channel(), spec.horizon, rng);
  r.decode_with(decoder);
  return r;
}

Scheme make_scheme(const SchemeSpec& spec) {
  spec.validate();
  Scheme s;
  s.spec = spec;
  s.encoder = std::make_shared<SlotPolicy>(spec.M, spec.A, spec.horizon);
  s.decoder = [m = spec.M](const Timeline& t) { return decode_first_count_slot(t, m); };
  return s;
}

Scheme make_binary(double power, double horizon) {
  return make_scheme({SchemeKind::BinaryZeroDark, 2, power, horizon, 0.0});
}

Scheme make_binary_dark(double power, double window, double dark_current) {
  return make_scheme({SchemeKind::BinaryDarkWindow, 2, power, window, dark_current});
}

Scheme make_mary(int messages, double power, double horizon) {
  return make_scheme({SchemeKind::MaryZeroDark, messages, power, horizon, 0.0});
}

Scheme make_mary_dark(int messages, double power, double window, double dark_current) {
  return make_scheme({SchemeKind::MaryDarkWindow, messages, power, window, dark_current});
}

std::optional<PerfReport> closed_form(const SchemeSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SchemeKind::BinaryZeroDark: return closed_form_binary(spec.A, spec.horizon);
    case SchemeKind::BinaryDarkWindow:
      return closed_form_binary_dark(spec.A, spec.horizon, spec.dark_current);
    case SchemeKind::MaryZeroDark: return closed_form_mary(spec.M, spec.A, spec.horizon);
    case SchemeKind::MaryDarkWindow: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace poisson_lab
