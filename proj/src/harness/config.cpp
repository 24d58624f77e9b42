#include "poisson_lab/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace poisson_lab::harness {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::istream& in, const std::string& source) {
  KeyValueFile f;
  f.source_ = source;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (!quoted && line[i] == '#') {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto diag = [&](const std::string& why) {
      return ConfigError(source + ":" + std::to_string(line_no) + ": " + why);
    };
    if (line.front() == '[') {
      if (line.back() != ']') throw diag("unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw diag("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw diag("expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = unquote(trim(std::string_view(line).substr(eq + 1)));
    if (key.empty()) throw diag("missing key before '='");
    const std::string full = section.empty() ? key : section + "." + key;
    f.entries_.emplace(full, Entry{value, line_no});
  }
  return f;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse(in, path);
}

std::vector<KeyValueFile::Entry> KeyValueFile::take_all(const std::string& key) {
  std::vector<Entry> out;
  auto [lo, hi] = entries_.equal_range(key);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  entries_.erase(lo, hi);
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.line < b.line; });
  return out;
}

std::optional<KeyValueFile::Entry> KeyValueFile::take(const std::string& key) {
  auto all = take_all(key);
  if (all.empty()) return std::nullopt;
  if (all.size() > 1) fail(all[1], key, "duplicate key");
  return all.front();
}

void KeyValueFile::reject_unused() const {
  if (entries_.empty()) return;
  const auto first = std::min_element(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
    return a.second.line < b.second.line;
  });
  fail(first->second, first->first, "unknown key");
}

void KeyValueFile::fail(const Entry& at, const std::string& key, const std::string& why) const {
  throw ConfigError(source_ + ":" + std::to_string(at.line) + ": " + key + ": " + why);
}

double parse_double(const std::string& text, const std::string& field) {
  // strtod accepts the usual spellings (1e-3, 0.5, inf is rejected below).
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || !std::isfinite(v)) {
    throw ConfigError(field + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& text, const std::string& field) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && ptr == text.data() + text.size()) return v;
  // Allow scientific shorthand such as 1e6 when it is an exact integer.
  const double d = parse_double(text, field);
  if (d < 0.0 || d != std::floor(d) || d > 9.0e18) {
    throw ConfigError(field + ": expected a nonnegative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(d);
}

int parse_int(const std::string& text, const std::string& field) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(field + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<MessageId> parse_message_list(const std::string& text) {
  std::vector<MessageId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("messages: empty entry in '" + text + "'");
    out.push_back(parse_int(item, "messages"));
  }
  if (out.empty()) throw ConfigError("messages: empty list");
  return out;
}

OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ConfigError("format: expected csv or json, got '" + text + "'");
}

void ExperimentConfig::validate() const {
  try {
    scheme.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scheme.") + e.what());
  }
  if (n_trials < 1) throw ConfigError("run.trials: must be >= 1");
  for (MessageId m : messages) {
    if (m < 0 || m >= scheme.M) {
      throw ConfigError("run.messages: message " + std::to_string(m) + " outside [0, M)");
    }
  }
}

ExperimentConfig resolve_config(KeyValueFile* file, const ConfigOverrides& overrides) {
  ExperimentConfig cfg;
  bool have_M = false, have_A = false, have_horizon = false;
  // Where each field was last set, for diagnostics raised by validate().
  std::map<std::string, std::string> origin;

  // Each setter converts parse errors into file diagnostics.
  auto from_file = [&](const std::string& key, auto&& apply) {
    if (!file) return false;
    const auto entry = file->take(key);
    if (!entry) return false;
    origin[key] = file->source() + ":" + std::to_string(entry->line);
    try {
      apply(entry->value);
    } catch (const ConfigError& e) {
      file->fail(*entry, key, e.what());
    }
    return true;
  };
  auto set_kind = [&](const std::string& v) {
    const auto kind = parse_scheme_kind(v);
    if (!kind) throw ConfigError("scheme: unknown scheme '" + v + "'");
    cfg.scheme.kind = *kind;
  };

  from_file("scheme.kind", set_kind);
  have_M |= from_file("scheme.M", [&](const std::string& v) { cfg.scheme.M = parse_int(v, "M"); });
  have_A |= from_file("scheme.A", [&](const std::string& v) { cfg.scheme.A = parse_double(v, "A"); });
  have_horizon |= from_file("scheme.horizon",
                            [&](const std::string& v) { cfg.scheme.horizon = parse_double(v, "horizon"); });
  from_file("scheme.dark_current",
            [&](const std::string& v) { cfg.scheme.dark_current = parse_double(v, "dark_current"); });
  from_file("run.trials", [&](const std::string& v) { cfg.n_trials = parse_uint(v, "trials"); });
  from_file("run.seed", [&](const std::string& v) { cfg.seed = parse_uint(v, "seed"); });
  from_file("run.messages", [&](const std::string& v) { cfg.messages = parse_message_list(v); });
  from_file("output.format", [&](const std::string& v) { cfg.format = parse_output_format(v); });
  from_file("output.path", [&](const std::string& v) { cfg.out_path = v; });

  if (overrides.scheme) {
    set_kind(*overrides.scheme);
    origin["scheme.kind"] = "--scheme";
  }
  if (overrides.M) {
    cfg.scheme.M = *overrides.M;
    have_M = true;
    origin["scheme.M"] = "--M";
  }
  if (overrides.A) {
    cfg.scheme.A = *overrides.A;
    have_A = true;
    origin["scheme.A"] = "--A";
  }
  if (overrides.horizon) {
    cfg.scheme.horizon = *overrides.horizon;
    have_horizon = true;
    origin["scheme.horizon"] = "--horizon";
  }
  if (overrides.dark_current) {
    cfg.scheme.dark_current = *overrides.dark_current;
    origin["scheme.dark_current"] = "--dark-current";
  }
  if (overrides.trials) {
    cfg.n_trials = *overrides.trials;
    origin["run.trials"] = "--trials";
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.format) cfg.format = parse_output_format(*overrides.format);
  if (overrides.out) cfg.out_path = *overrides.out;
  if (overrides.messages) {
    cfg.messages = parse_message_list(*overrides.messages);
    origin["run.messages"] = "--messages";
  }

  if (!have_M && !is_binary(cfg.scheme.kind)) cfg.scheme.M = 4;
  if (is_dark_window(cfg.scheme.kind)) {
    const auto d = default_dark_window(std::max(0.0, cfg.scheme.dark_current));
    if (!have_A) cfg.scheme.A = d.A;
    if (!have_horizon) cfg.scheme.horizon = d.window;
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    const auto it = origin.find(what.substr(0, what.find(':')));
    if (it == origin.end()) throw;
    throw ConfigError(it->second + ": " + what);
  }
  return cfg;
}

}  // namespace poisson_lab::harness
