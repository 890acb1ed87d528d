#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpoly/inequality.hpp"
#include "qpoly/serialize.hpp"

namespace qpoly {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;               // entropy | ccq-verify | roof | uq |
                                     // scan | theorem1 | monogamy
  std::vector<double> q_values{2.0};
  std::vector<int> dims{2, 2};
  int samples = 1;
  std::uint64_t seed = 7;
  double tolerance = 1e-9;
  OptimizerBudget budget;
  std::string check;                  // scan only
  std::string measure = "tsallis";    // monogamy only
  std::string input_state;            // optional path
  std::string out;                    // optional report path
  std::string table;                  // optional table path
  std::string format = "json-lines";  // json-lines | csv
};

/// Parse command line (and optional --config file; flags override the file).
/// Throws std::invalid_argument with a message naming the offending field.
RunConfig parse_config(const std::vector<std::string>& args);

/// One result item; these become the rows of the emitted table.
struct ReportRow {
  std::string check;
  double q = 1.0;
  int d = 0;
  int sample_index = 0;
  double gap = 0.0;
  std::string verdict;  // verified | violated | inconclusive | "" (no claim)
  std::uint64_t seed = 0;
  json extra;  // per-command detail (kept in the report, not the table)
};

struct ReportRecord {
  RunConfig config;
  std::vector<ReportRow> rows;
  json summary;
  double wall_time_ms = 0.0;
  std::string version = kVersion;

  /// 0 all verified (or nothing to verify), 2 any violated, 3 any
  /// inconclusive and none violated.
  int exit_code() const;
};

/// Dispatch the configured command. Writes the report and table files when
/// paths are configured (atomically).
ReportRecord run(const RunConfig& config);

/// The report as JSON; timing is excluded from the determinism contract and
/// can be stripped for comparisons.
json report_to_json(const ReportRecord& record, bool include_timing = true);

/// Rows as plot-ready bytes: CSV (header + rows) or JSON lines, numbers with
/// 12 significant digits.
std::string emit_table(const ReportRecord& record, const std::string& format);

}  // namespace qpoly
