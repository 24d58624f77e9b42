// schemes.hpp -- the stop-at-first-count feedback schemes.
//
// Message 0 is always silent. A nonzero message m owns slot m of the
// observation window (the whole window in the binary case) and transmits at
// power A inside that slot until the first count is fed back. The decoder
// answers 0 on an empty output and otherwise the slot of the first count.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "poisson_lab/analytics.hpp"
#include "poisson_lab/channel.hpp"

namespace poisson_lab {

enum class SchemeKind { BinaryZeroDark, BinaryDarkWindow, MaryZeroDark, MaryDarkWindow };

std::string_view to_string(SchemeKind kind) noexcept;
/// Accepts the canonical names plus the aliases binary, binary-dark, mary, mary-dark.
std::optional<SchemeKind> parse_scheme_kind(std::string_view name) noexcept;
bool is_dark_window(SchemeKind kind) noexcept;
bool is_binary(SchemeKind kind) noexcept;

struct SchemeSpec {
  SchemeKind kind = SchemeKind::BinaryZeroDark;
  int M = 2;
  double A = 1.0;
  /// T for the zero-dark kinds, the window length for the dark-window kinds.
  double horizon = 1.0;
  double dark_current = 0.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Defaults keeping both error terms of the binary dark-window scheme at or
/// below 1%: A = 1e4 and a window of 0.01 / dark current.
struct DarkWindowDefaults {
  double A;
  double window;
};
DarkWindowDefaults default_dark_window(double dark_current);

/// Slot boundary k in [0, M - 1]; the last boundary is the horizon exactly.
double slot_boundary(int messages, double horizon, int k) noexcept;

/// Stateless slot encoder; safe to share between concurrent trials.
class SlotPolicy final : public EncoderPolicy {
 public:
  SlotPolicy(int messages, double power, double horizon);
  RateSegment query(MessageId message, double now, const Timeline& history,
                    RandomSource& rng) const override;

 private:
  int messages_;
  double power_;
  double horizon_;
};

/// First-count slot decoder. A count exactly on a boundary belongs to the
/// earlier slot, matching the (start, end] ownership of channel segments.
MessageId decode_first_count_slot(const Timeline& timeline, int messages);

struct Scheme {
  SchemeSpec spec;
  std::shared_ptr<const EncoderPolicy> encoder;
  Decoder decoder;

  /// Dark current from the spec, peak cap at A.
  ChannelParams channel() const;
  /// One decoded transmission of `message`.
  TrialResult run(MessageId message, RandomSource& rng) const;
};

Scheme make_binary(double power, double horizon);
Scheme make_binary_dark(double power, double window, double dark_current);
Scheme make_mary(int messages, double power, double horizon);
Scheme make_mary_dark(int messages, double power, double window, double dark_current);
Scheme make_scheme(const SchemeSpec& spec);

/// Closed-form performance where one exists; none for mary-dark-window.
std::optional<PerfReport> closed_form(const SchemeSpec& spec);

}  // namespace poisson_lab
