// config.hpp -- experiment configuration from a sectioned key = value file,
// overridden field by field from the command line.
//
//   # comment
//   [scheme]
//   kind = binary-zero-dark
//   A = 10
//   horizon = 5
//   [run]
//   trials = 1000000
//   seed = 0
//
// Values may be double-quoted. Unknown sections or keys are errors.
#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poisson_lab/schemes.hpp"

namespace poisson_lab::harness {

/// A user input problem; maps to exit status 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KeyValueFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static KeyValueFile parse(std::istream& in, const std::string& source);
  static KeyValueFile load(const std::string& path);

  const std::string& source() const noexcept { return source_; }
  /// Entries for "section.key" in file order.
  std::vector<Entry> take_all(const std::string& key);
  std::optional<Entry> take(const std::string& key);
  /// Throws ConfigError naming the first key nobody took.
  void reject_unused() const;

  [[noreturn]] void fail(const Entry& at, const std::string& key, const std::string& why) const;

 private:
  std::string source_;
  std::multimap<std::string, Entry> entries_;
};

enum class OutputFormat { Csv, Json };
OutputFormat parse_output_format(const std::string& text);

struct ExperimentConfig {
  SchemeSpec scheme{SchemeKind::BinaryZeroDark, 2, 10.0, 5.0, 0.0};
  std::uint64_t n_trials = 1'000'000;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> out_path;
  /// Empty means every message.
  std::vector<MessageId> messages;

  /// Throws ConfigError with the offending field.
  void validate() const;
};

/// Command-line values; anything set here wins over the file.
struct ConfigOverrides {
  std::optional<std::string> scheme;
  std::optional<int> M;
  std::optional<double> A;
  std::optional<double> horizon;
  std::optional<double> dark_current;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<std::string> messages;
};

/// Defaults, then the file (if any), then overrides. Dark-window kinds with
/// no A or window fall back to default_dark_window. Leftover file keys in
/// sections other than scheme/run/output stay in `file` for the caller.
ExperimentConfig resolve_config(KeyValueFile* file, const ConfigOverrides& overrides);

double parse_double(const std::string& text, const std::string& field);
std::uint64_t parse_uint(const std::string& text, const std::string& field);
int parse_int(const std::string& text, const std::string& field);
std::vector<MessageId> parse_message_list(const std::string& text);

}  // namespace poisson_lab::harness
