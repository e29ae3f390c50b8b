#include "qhkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qhkit {
namespace {

using nlohmann::json;

std::string format12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json number(double v) {
  if (!std::isfinite(v)) return format12(v);
  return std::stod(format12(v));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::size_t ExperimentReport::violations() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; }));
}

ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  throw Error(ErrorCode::kConfiguration, "unknown report format '" + s + "' (expected json or csv)");
}

nlohmann::json report_to_json(const ExperimentReport& report) {
  json constants = json::array();
  for (const ReportConstant& c : report.constants) {
    json e{{"name", c.name}, {"value", number(c.value)}, {"samples", c.samples}};
    e["sidedness"] = c.sidedness ? json(to_string(*c.sidedness)) : json("exact");
    constants.push_back(std::move(e));
  }
  json summary{{"rows", report.rows.size()},
               {"violations", report.violations()},
               {"skipped", report.skipped.size()},
               {"passed", report.passed()},
               {"constants", constants},
               {"notes", report.notes}};
  if (report.wall_time_seconds) summary["wall_time_seconds"] = number(*report.wall_time_seconds);

  json rows = json::array();
  for (const ReportRow& r : report.rows) {
    json values = json::object();
    for (const auto& [k, v] : r.values) values[k] = number(v);
    json row{{"index", r.index}, {"check", r.check}, {"pass", r.pass}, {"values", values}};
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(std::move(row));
  }
  json skipped = json::array();
  for (const SkippedRow& s : report.skipped) {
    skipped.push_back({{"index", s.index}, {"check", s.check}, {"reason", s.reason}});
  }
  return json{{"experiment", report.experiment},
              {"config", report.config},
              {"summary", summary},
              {"rows", rows},
              {"skipped", skipped}};
}

std::string report_to_csv(const ExperimentReport& report) {
  std::vector<std::string> keys;
  for (const ReportRow& r : report.rows) {
    for (const auto& kv : r.values) {
      if (std::find(keys.begin(), keys.end(), kv.first) == keys.end()) keys.push_back(kv.first);
    }
  }
  std::ostringstream out;
  out << "index,check,pass,note";
  for (const std::string& k : keys) out << ',' << csv_field(k);
  out << '\n';
  for (const ReportRow& r : report.rows) {
    out << r.index << ',' << csv_field(r.check) << ',' << (r.pass ? "true" : "false") << ',' << csv_field(r.note);
    for (const std::string& k : keys) {
      out << ',';
      const auto it = std::find_if(r.values.begin(), r.values.end(), [&](const auto& kv) { return kv.first == k; });
      if (it != r.values.end()) out << format12(it->second);
    }
    out << '\n';
  }
  return out.str();
}

void write_report(const ExperimentReport& report, const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open report file " + path);
  if (format == ReportFormat::kJson) {
    out << report_to_json(report).dump(2) << '\n';
  } else {
    out << report_to_csv(report);
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing report file " + path);
}

}  // namespace qhkit
