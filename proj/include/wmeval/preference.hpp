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

// Human preference annotations: record validation, per-dimension statistics,
// two-group divergence checks, and supervised fine-tuning export.

#ifndef WMEVAL_PREFERENCE_HPP
#define WMEVAL_PREFERENCE_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "wmeval/error.hpp"
#include "wmeval/interchange/artifacts.hpp"
#include "wmeval/numerics/statistics.hpp"

namespace wmeval::preference {

inline constexpr std::array<std::string_view, 6> kDimensions = {
    "overall_realism",       "vehicle_realism",  "pedestrian_realism",
    "physical_plausibility", "consistency_3d4d", "behavioral_safety"};

inline bool is_dimension(std::string_view d) {
  return std::find(kDimensions.begin(), kDimensions.end(), d) != kDimensions.end();
}

struct ScoreRecord {
  std::string video_id;
  std::string model_id;
  std::string dimension;
  std::string group_id;
  double score = 0.0;
  std::string rationale;
  std::optional<double> duration_seconds;
};

inline void from_json(const Json& j, ScoreRecord& r) {
  r.video_id = j.value("video_id", std::string());
  r.model_id = j.value("model_id", std::string());
  r.dimension = j.value("dimension", std::string());
  r.group_id = j.value("group_id", std::string());
  r.score = j.at("score").get<double>();
  r.rationale = j.value("rationale", std::string());
  if (j.contains("duration_seconds") && !j.at("duration_seconds").is_null())
    r.duration_seconds = j.at("duration_seconds").get<double>();
}

inline void to_json(Json& j, const ScoreRecord& r) {
  j = Json{{"video_id", r.video_id}, {"model_id", r.model_id},   {"dimension", r.dimension},
           {"group_id", r.group_id}, {"score", r.score},         {"rationale", r.rationale}};
  if (r.duration_seconds) j["duration_seconds"] = *r.duration_seconds;
}

enum class Violation { kScoreOutOfRange, kNonIntegerScore, kEmptyRationale, kUnknownDimension, kUnknownGroup, kMissingId };

inline std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::kScoreOutOfRange: return "ScoreOutOfRange";
    case Violation::kNonIntegerScore: return "NonIntegerScore";
    case Violation::kEmptyRationale: return "EmptyRationale";
    case Violation::kUnknownDimension: return "UnknownDimension";
    case Violation::kUnknownGroup: return "UnknownGroup";
    case Violation::kMissingId: return "MissingId";
  }
  return "?";
}

/// Every invariant the record breaks; empty means valid.
inline std::vector<Violation> validate_record(const ScoreRecord& r) {
  std::vector<Violation> out;
  if (!(r.score >= 1.0 && r.score <= 10.0)) out.push_back(Violation::kScoreOutOfRange);
  if (!std::isfinite(r.score) || r.score != std::floor(r.score)) out.push_back(Violation::kNonIntegerScore);
  if (std::all_of(r.rationale.begin(), r.rationale.end(), [](unsigned char c) { return std::isspace(c); }))
    out.push_back(Violation::kEmptyRationale);
  if (!is_dimension(r.dimension)) out.push_back(Violation::kUnknownDimension);
  if (r.group_id != "A" && r.group_id != "B") out.push_back(Violation::kUnknownGroup);
  if (r.video_id.empty() || r.model_id.empty()) out.push_back(Violation::kMissingId);
  return out;
}

struct DimensionStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

/// Linear-interpolation quantiles and N-1 standard deviation; a single value
/// has standard deviation 0.
inline DimensionStats describe(std::vector<double> values) {
  require(!values.empty(), ErrorCode::kNoRecords, "no matching records");
  std::sort(values.begin(), values.end());
  DimensionStats s;
  s.count = values.size();
  s.min = values.front();
  s.max = values.back();
  s.mean = numerics::mean(values);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  s.median = numerics::interpolated_quantile(values, 0.5);
  s.q25 = numerics::interpolated_quantile(values, 0.25);
  s.q75 = numerics::interpolated_quantile(values, 0.75);
  return s;
}

/// Statistics over records of one dimension, optionally restricted to a model.
inline DimensionStats dimension_stats(std::span<const ScoreRecord> records, std::string_view dimension,
                                      std::optional<std::string_view> model = std::nullopt) {
  std::vector<double> values;
  for (const auto& r : records)
    if (r.dimension == dimension && (!model || r.model_id == *model)) values.push_back(r.score);
  require(!values.empty(), ErrorCode::kNoRecords,
          "no records for dimension '" + std::string(dimension) + "'" +
              (model ? " and model '" + std::string(*model) + "'" : std::string()));
  return describe(std::move(values));
}

struct Divergence {
  std::string video_id;
  std::string model_id;
  std::string dimension;
  double score_a = 0.0;  // group mean when a group rated more than once
  double score_b = 0.0;

  auto key() const { return std::tie(video_id, model_id, dimension); }
};

/// Co-annotated items whose group scores differ by at least `threshold`,
/// sorted by (video, model, dimension).
inline std::vector<Divergence> reconcile_groups(std::span<const ScoreRecord> records, double threshold) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::array<std::pair<double, std::size_t>, 2>> acc;
  for (const auto& r : records) {
    int g = r.group_id == "A" ? 0 : r.group_id == "B" ? 1 : -1;
    if (g < 0) continue;
    auto& slot = acc[{r.video_id, r.model_id, r.dimension}][static_cast<std::size_t>(g)];
    slot.first += r.score;
    slot.second += 1;
  }
  std::vector<Divergence> out;
  for (const auto& [key, groups] : acc) {
    if (groups[0].second == 0 || groups[1].second == 0) continue;
    const double a = groups[0].first / static_cast<double>(groups[0].second);
    const double b = groups[1].first / static_cast<double>(groups[1].second);
    if (std::abs(a - b) >= threshold) out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), a, b});
  }
  return out;
}

/// Rounds to the 0.5 grid and clamps to [1, 10].
inline double to_sft_score(double score) { return std::clamp(std::round(score * 2.0) / 2.0, 1.0, 10.0); }

/// One {"score", "reason"} object per record, newline-delimited. Every record
/// must validate; the first invalid one raises UnvalidatedRecord.
inline std::string export_sft(std::span<const ScoreRecord> records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto v = validate_record(records[i]);
    if (!v.empty())
      fail(ErrorCode::kUnvalidatedRecord,
           "record " + std::to_string(i) + " fails validation: " + std::string(to_string(v.front())));
    nlohmann::ordered_json line;
    line["score"] = to_sft_score(records[i].score);
    line["reason"] = records[i].rationale;
    out += line.dump();  // integral doubles print as "7.0"
    out += '\n';
  }
  return out;
}

inline constexpr std::array<std::string_view, 50> kStopWords = {
    "a",    "an",   "the",  "and",  "or",    "but",  "if",   "then", "of",    "to",
    "in",   "on",   "at",   "by",   "for",   "with", "from", "as",   "is",    "are",
    "was",  "were", "be",   "been", "being", "it",   "its",  "this", "that",  "these",
    "those", "there", "here", "has", "have",  "had",  "do",   "does", "did",   "not",
    "no",   "very", "some", "more", "most",  "than", "too",  "so",   "which", "while"};

/// Lowercased alphanumeric tokens of every rationale, minus stop words.
inline std::map<std::string, std::size_t> keyword_counts(std::span<const ScoreRecord> records) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) {
    std::string token;
    auto flush = [&] {
      if (!token.empty() && std::find(kStopWords.begin(), kStopWords.end(), token) == kStopWords.end())
        ++counts[token];
      token.clear();
    };
    for (unsigned char c : r.rationale) {
      if (std::isalnum(c))
        token += static_cast<char>(std::tolower(c));
      else
        flush();
    }
    flush();
  }
  return counts;
}

inline std::vector<ScoreRecord> parse_records(const std::vector<Json>& lines) {
  std::vector<ScoreRecord> out;
  try {
    for (const auto& j : lines) out.push_back(j.get<ScoreRecord>());
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, std::string("score record: ") + e.what());
  }
  return out;
}

}  // namespace wmeval::preference

#endif  // WMEVAL_PREFERENCE_HPP
