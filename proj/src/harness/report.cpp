#include "poisson_lab/harness/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace poisson_lab::harness {
namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json render_json(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(double x) const {
      if (!std::isfinite(x)) return nullptr;
      return x;
    }
    nlohmann::ordered_json operator()(std::int64_t x) const { return x; }
    nlohmann::ordered_json operator()(std::uint64_t x) const { return x; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render_csv(row[i]);
    out << '\n';
  }
}

void write_json_lines(std::ostream& out, const Table& table) {
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.header.size(); ++i) {
      obj[table.header[i]] = render_json(row[i]);
    }
    out << obj.dump() << '\n';
  }
}

void write_table(std::ostream& out, const Table& table, OutputFormat format) {
  if (format == OutputFormat::Json) {
    write_json_lines(out, table);
  } else {
    write_csv(out, table);
  }
}

Table to_table(std::span<const ReportRow> rows) {
  Table t;
  std::stringstream header{std::string(kSimulateCsvHeader)};
  for (std::string name; std::getline(header, name, ',');) t.header.push_back(name);

  auto optional_cell = [](const std::optional<double>& v) -> Cell {
    if (v) return *v;
    return std::monostate{};
  };
  for (const auto& r : rows) {
    t.rows.push_back({r.kind, static_cast<std::int64_t>(r.M), r.A, r.horizon, r.dark_current,
                      r.message, r.n_trials, r.p_err.mean, r.p_err.ci_low, r.p_err.ci_high,
                      r.energy.mean, r.energy.ci_low, r.energy.ci_high, optional_cell(r.cf_p_err),
                      optional_cell(r.cf_energy), r.seed});
  }
  return t;
}

}  // namespace poisson_lab::harness
