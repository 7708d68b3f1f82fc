// Copyright 2026 The wmeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Evaluation reports and their serializations: canonical JSON, CSV,
// aspect-grouped markdown, and normalized radar axes.

#ifndef WMEVAL_REPORT_HPP
#define WMEVAL_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wmeval/error.hpp"
#include "wmeval/interchange/artifacts.hpp"
#include "wmeval/metrics.hpp"

namespace wmeval {

inline constexpr std::string_view kEngineVersion = "0.1.0";

struct DimensionResult {
  std::string id;
  std::optional<double> score;  // absent when the dimension could not be computed
  std::map<std::string, double> per_video;
  std::map<std::string, double> sub;  // named sub-statistics
  std::vector<std::string> notes;

  const MetricInfo& info() const { return metric_info(id); }
};

struct MetricReport {
  std::string engine_version = std::string(kEngineVersion);
  std::string config_hash;
  std::string run_id;
  std::string model_id;
  Json settings = Json::object();         // thresholds and protocol choices in effect
  std::vector<DimensionResult> dimensions;  // catalog order
  std::vector<std::string> warnings;

  const DimensionResult* find(std::string_view id) const {
    for (const auto& d : dimensions)
      if (d.id == id) return &d;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Canonical JSON: sorted keys, two-space indentation, floats at 6 significant
// digits, non-finite numbers as null.

namespace detail {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void write_canonical(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {  // nlohmann::json keeps keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        write_canonical(v, out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_canonical(j[i], out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

inline Json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? Json(*v) : Json(nullptr);
}

inline Json finite_map(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  return j;
}

}  // namespace detail

inline std::string canonical_json(const Json& j) {
  std::string out;
  detail::write_canonical(j, out, 0);
  out += '\n';
  return out;
}

inline Json to_json(const MetricReport& r) {
  Json dims = Json::array();
  for (const auto& d : r.dimensions) {
    const auto& info = d.info();
    dims.push_back({{"id", d.id},
                    {"name", std::string(info.name)},
                    {"aspect", std::string(to_string(info.aspect))},
                    {"direction", info.direction == Direction::kHigherIsBetter ? "higher" : "lower"},
                    {"status", d.score ? "ok" : "failed"},
                    {"score", detail::optional_number(d.score)},
                    {"per_video", detail::finite_map(d.per_video)},
                    {"sub", detail::finite_map(d.sub)},
                    {"notes", d.notes}});
  }
  return Json{{"meta",
               {{"engine_version", r.engine_version},
                {"config_hash", r.config_hash},
                {"run_id", r.run_id},
                {"model_id", r.model_id},
                {"radar_table_version", std::string(kRadarTableVersion)},
                {"settings", r.settings}}},
              {"dimensions", dims},
              {"warnings", r.warnings}};
}

inline MetricReport report_from_json(const Json& j) {
  MetricReport r;
  try {
    const auto& meta = j.at("meta");
    r.engine_version = meta.at("engine_version").get<std::string>();
    r.config_hash = meta.at("config_hash").get<std::string>();
    r.run_id = meta.at("run_id").get<std::string>();
    r.model_id = meta.at("model_id").get<std::string>();
    r.settings = meta.value("settings", Json::object());
    for (const auto& d : j.at("dimensions")) {
      DimensionResult dr;
      dr.id = d.at("id").get<std::string>();
      metric_info(dr.id);
      if (!d.at("score").is_null()) dr.score = d.at("score").get<double>();
      const Json per_video = d.value("per_video", Json::object());
      for (const auto& [k, v] : per_video.items()) dr.per_video[k] = v.is_null() ? NAN : v.get<double>();
      const Json sub = d.value("sub", Json::object());
      for (const auto& [k, v] : sub.items()) dr.sub[k] = v.is_null() ? NAN : v.get<double>();
      dr.notes = d.value("notes", std::vector<std::string>{});
      r.dimensions.push_back(std::move(dr));
    }
    r.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, std::string("report: ") + e.what());
  }
  return r;
}

inline std::string report_json(const MetricReport& r) { return canonical_json(to_json(r)); }

// ---------------------------------------------------------------------------
// CSV: one row per (model, dimension)

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string report_csv(const MetricReport& r) {
  std::string out = "model_id,dimension_id,dimension_name,aspect,direction,score\n";
  for (const auto& d : r.dimensions) {
    const auto& info = d.info();
    out += csv_field(r.model_id) + "," + d.id + "," + std::string(info.name) + "," +
           std::string(to_string(info.aspect)) + "," +
           (info.direction == Direction::kHigherIsBetter ? "higher" : "lower") + "," +
           (d.score ? detail::format_double(*d.score) : "") + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radar axes

/// clamp((v - offset) / scale, 0, 1), flipped for lower-is-better dimensions.
inline double radar_value(const MetricInfo& info, double raw) {
  double v = std::clamp((raw - info.radar.offset) / info.radar.scale, 0.0, 1.0);
  if (std::isnan(v)) v = 0.0;
  return info.direction == Direction::kLowerIsBetter ? 1.0 - v : v;
}

inline Json radar_data(const MetricReport& r) {
  Json axes = Json::array();
  for (const auto& d : r.dimensions) {
    if (!d.score) continue;
    const auto& info = d.info();
    axes.push_back({{"id", d.id},
                    {"name", std::string(info.name)},
                    {"aspect", std::string(to_string(info.aspect))},
                    {"raw", *d.score},
                    {"value", radar_value(info, *d.score)}});
  }
  return Json{{"table_version", std::string(kRadarTableVersion)}, {"model_id", r.model_id}, {"axes", axes}};
}

// ---------------------------------------------------------------------------
// Markdown: one table per aspect, dimensions as columns.

inline std::string report_markdown(const MetricReport& r) {
  std::string out = "# Evaluation report: " + r.model_id + "\n\n";
  out += "run `" + r.run_id + "`, engine " + r.engine_version + ", config " + r.config_hash + "\n";
  for (Aspect aspect : {Aspect::kGeneration, Aspect::kReconstruction, Aspect::kAction, Aspect::kDownstream,
                        Aspect::kHuman}) {
    std::vector<const DimensionResult*> cols;
    for (const auto& d : r.dimensions)
      if (d.info().aspect == aspect) cols.push_back(&d);
    if (cols.empty()) continue;
    out += "\n## Aspect: " + std::string(to_string(aspect)) + "\n\n| Model |";
    for (const auto* d : cols) {
      const auto& info = d->info();
      out += " " + d->id + " " + std::string(info.name) +
             (info.direction == Direction::kHigherIsBetter ? " (higher)" : " (lower)") + " |";
    }
    out += "\n|---|";
    for (std::size_t i = 0; i < cols.size(); ++i) out += "---:|";
    out += "\n| " + r.model_id + " |";
    for (const auto* d : cols) out += " " + (d->score ? detail::format_double(*d->score) : std::string("n/a")) + " |";
    out += "\n";
  }
  if (!r.warnings.empty()) {
    out += "\n## Warnings\n\n";
    for (const auto& w : r.warnings) out += "- " + w + "\n";
  }
  return out;
}

enum class ReportFormat { kJson, kCsv, kMarkdown, kRadar };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "md" || s == "markdown") return ReportFormat::kMarkdown;
  if (s == "radar" || s == "radar-data") return ReportFormat::kRadar;
  fail(ErrorCode::kParseError, "unknown report format '" + std::string(s) + "'");
}

inline std::string render_report(const MetricReport& r, ReportFormat f) {
  switch (f) {
    case ReportFormat::kJson: return report_json(r);
    case ReportFormat::kCsv: return report_csv(r);
    case ReportFormat::kMarkdown: return report_markdown(r);
    case ReportFormat::kRadar: return canonical_json(radar_data(r));
  }
  return {};
}

inline std::string_view report_file_name(ReportFormat f) {
  switch (f) {
    case ReportFormat::kJson: return "report.json";
    case ReportFormat::kCsv: return "report.csv";
    case ReportFormat::kMarkdown: return "report.md";
    case ReportFormat::kRadar: return "radar.json";
  }
  return "report";
}

}  // namespace wmeval

#endif  // WMEVAL_REPORT_HPP
