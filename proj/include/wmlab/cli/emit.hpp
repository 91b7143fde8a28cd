#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmlab/fourier/io.hpp"
#include "wmlab/lab/report.hpp"
#include "wmlab/variation/s_norm.hpp"

namespace wmlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "wmlab.report/1";
inline constexpr const char* manifest_schema = "wmlab.manifest/1";

/// Writes JSON with every float as %.17g (non-finite as null); indent < 0 gives one line.
inline void write_json(std::ostream& out, const Json& value, int indent = -1, int depth = 0) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        out << Json(key).dump() << (indent < 0 ? ":" : ": ");
        write_json(out, item, indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      out << '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        write_json(out, item, indent, depth + 1);
      }
      newline(depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = value.get<double>();
      out << (std::isfinite(x) ? format_real(x) : "null");
      return;
    }
    default:
      out << value.dump();
  }
}

inline std::string json_text(const Json& value, int indent = -1) {
  std::ostringstream out;
  write_json(out, value, indent);
  return out.str();
}

inline Json to_json(const SamplingSpec& spec) {
  return Json{{"dimension", spec.dimension}, {"lambda0", spec.lambda0}, {"lambda1", spec.lambda1},
              {"lambda2", spec.lambda2},     {"modulation", spec.modulation}, {"angle", spec.angle},
              {"samples", spec.samples},     {"seed", spec.seed},      {"window", spec.window}};
}

inline Json to_json(const RatioStats& stats) {
  return Json{{"count", stats.count}, {"min", stats.min}, {"median", stats.median}, {"max", stats.max}};
}

/// One estimate check as a versioned record.
struct EstimateRecord {
  EstimateReport report;
  SamplingSpec spec;
};

inline Json to_json(const EstimateRecord& record) {
  const auto& r = record.report;
  Json parameters = Json::object();
  for (const auto& [key, value] : r.parameters) parameters[key] = value;
  Json conditions = Json::array();
  for (const auto& c : r.conditions)
    conditions.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"passed", c.passed}});
  Json table = Json::array();
  for (const auto& row : r.table)
    table.push_back({{"label", row.label}, {"scales", row.scales}, {"stats", to_json(row.stats)}, {"feasible", row.feasible}});
  Json slope = nullptr;
  if (r.slope)
    slope = {{"slope", r.slope->slope}, {"intercept", r.slope->intercept}, {"residual", r.slope->residual},
             {"points", r.slope->points}};
  return Json{{"schema", report_schema},
              {"id", r.id},
              {"spec", to_json(record.spec)},
              {"parameters", parameters},
              {"stats", to_json(r.stats)},
              {"bracket", {{"lower", r.bracket.lower}, {"upper", r.bracket.upper}}},
              {"violations", r.violations},
              {"slope", slope},
              {"conditions", conditions},
              {"table", table},
              {"notes", r.notes},
              {"verdict", r.pass() ? "pass" : "fail"}};
}

/// A norm bound with the grid and seed it was computed on.
struct NormRecord {
  NormReport report;
  std::string grid;
  std::uint64_t seed = 0;
};

inline Json to_json(const NormRecord& record) {
  const auto& r = record.report;
  Json parameters = Json::object();
  for (const auto& [key, value] : r.parameters) parameters[key] = value;
  const auto p = r.parameters.find("p");
  return Json{{"schema", report_schema},
              {"name", r.quantity},
              {"lower", r.lower},
              {"upper", r.upper},
              {"p", p == r.parameters.end() ? Json(nullptr) : Json(p->second)},
              {"grid", record.grid},
              {"seed", record.seed},
              {"methods", r.methods},
              {"parameters", parameters}};
}

inline std::string csv_header(const EstimateRecord*) {
  return "id,seed,samples,count,min,median,max,bracket_lower,bracket_upper,violations,verdict";
}

inline std::string csv_row(const EstimateRecord& record) {
  const auto& r = record.report;
  return r.id + ',' + std::to_string(record.spec.seed) + ',' + std::to_string(record.spec.samples) + ',' +
         std::to_string(r.stats.count) + ',' + format_real(r.stats.min) + ',' + format_real(r.stats.median) + ',' +
         format_real(r.stats.max) + ',' + format_real(r.bracket.lower) + ',' + format_real(r.bracket.upper) + ',' +
         std::to_string(r.violations) + ',' + (r.pass() ? "pass" : "fail");
}

inline std::string csv_header(const NormRecord*) { return "name,lower,upper,p,grid,seed"; }

inline std::string csv_row(const NormRecord& record) {
  const auto& r = record.report;
  const auto p = r.parameters.find("p");
  return r.quantity + ',' + format_real(r.lower) + ',' + format_real(r.upper) + ',' +
         (p == r.parameters.end() ? std::string() : format_real(p->second)) + ',' + record.grid + ',' +
         std::to_string(record.seed);
}

enum class ReportFormat { Json, Csv };
enum class WriteMode { Truncate, Append };

/// JSON: one compact object per line. CSV: a header row when the file starts empty, then one row per record.
template <class Record>
void emit_report(const std::filesystem::path& path, const std::vector<Record>& records, ReportFormat format,
                 WriteMode mode = WriteMode::Append) {
  if (records.empty()) throw ArityError("no records to write to " + path.string());
  std::error_code ignored;
  const bool fresh = mode == WriteMode::Truncate || !std::filesystem::exists(path) ||
                     std::filesystem::file_size(path, ignored) == 0;
  std::ofstream out(path, mode == WriteMode::Truncate ? std::ios::trunc : std::ios::app);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (format == ReportFormat::Json) {
    for (const auto& record : records) out << json_text(to_json(record)) << '\n';
  } else {
    if (fresh) out << csv_header(static_cast<const Record*>(nullptr)) << '\n';
    for (const auto& record : records) out << csv_row(record) << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

/// A single indented JSON document.
inline void write_json_file(const std::filesystem::path& path, const Json& document) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_json(out, document, 2);
  out << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace wmlab
