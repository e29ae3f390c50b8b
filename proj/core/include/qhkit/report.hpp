#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qhkit/conditions.hpp"

namespace qhkit {

/// One measured check: inputs, measured values and bound values in insertion
/// order, and whether the bound held.
struct ReportRow {
  std::size_t index = 0;
  std::string check;
  std::vector<std::pair<std::string, double>> values{};
  bool pass = true;
  std::string note{};

  ReportRow& add(std::string key, double value) {
    values.emplace_back(std::move(key), value);
    return *this;
  }
};

/// A sample that could not be evaluated (disconnected pair, budget, ...).
/// Never counted as a violation.
struct SkippedRow {
  std::size_t index = 0;
  std::string check;
  std::string reason;
};

struct ReportConstant {
  std::string name;
  double value = 0.0;
  std::optional<Sidedness> sidedness;
  std::size_t samples = 0;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config;
  std::vector<ReportRow> rows;
  std::vector<SkippedRow> skipped;
  std::vector<ReportConstant> constants;
  std::vector<std::string> notes;
  /// Left empty unless the config asks for it, so reports stay reproducible.
  std::optional<double> wall_time_seconds;

  std::size_t violations() const;
  bool passed() const { return violations() == 0; }
};

enum class ReportFormat { kJson, kCsv };

/// "json" or "csv"; throws kConfiguration otherwise.
ReportFormat parse_report_format(const std::string& s);

/// Numbers are rounded to 12 significant digits; non-finite values become the
/// strings "inf", "-inf" and "nan".
nlohmann::json report_to_json(const ExperimentReport& report);

/// Header row (index, check, pass, note, then every value key in order of
/// first appearance) and one line per row.
std::string report_to_csv(const ExperimentReport& report);

/// Throws kIo with the path on failure.
void write_report(const ExperimentReport& report, const std::string& path, ReportFormat format);

}  // namespace qhkit
