// report.hpp -- CSV and JSON-lines rendering of result tables.
//
// Floats are printed with 17 significant digits so every value round-trips.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "poisson_lab/harness/config.hpp"
#include "poisson_lab/statistics.hpp"

namespace poisson_lab::harness {

/// Empty cells render as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, std::string, double, std::int64_t, std::uint64_t, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double x);
void write_csv(std::ostream& out, const Table& table);
/// One JSON object per line, keys in header order.
void write_json_lines(std::ostream& out, const Table& table);
void write_table(std::ostream& out, const Table& table, OutputFormat format);

inline constexpr std::string_view kSimulateCsvHeader =
    "kind,M,A,horizon,dark_current,message,n_trials,p_err,p_err_lo,p_err_hi,"
    "energy,energy_lo,energy_hi,cf_p_err,cf_energy,seed";

/// One simulate/sweep result line: a message, or "avg" for the equiprobable average.
struct ReportRow {
  std::string kind;
  int M = 2;
  double A = 0.0;
  double horizon = 0.0;
  double dark_current = 0.0;
  std::string message;
  std::uint64_t n_trials = 0;
  Estimate p_err;
  Estimate energy;
  std::optional<double> cf_p_err;
  std::optional<double> cf_energy;
  std::uint64_t seed = 0;
};

Table to_table(std::span<const ReportRow> rows);

}  // namespace poisson_lab::harness
