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

#ifndef WMEVAL_METRICS_HPP
#define WMEVAL_METRICS_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wmeval/error.hpp"

namespace wmeval {

enum class Aspect { kGeneration, kReconstruction, kAction, kDownstream, kHuman };

inline std::string_view to_string(Aspect a) {
  switch (a) {
    case Aspect::kGeneration: return "Generation";
    case Aspect::kReconstruction: return "Reconstruction";
    case Aspect::kAction: return "Action";
    case Aspect::kDownstream: return "Downstream";
    case Aspect::kHuman: return "Human";
  }
  return "?";
}

enum class Direction { kHigherIsBetter, kLowerIsBetter };

/// How a dimension is placed on a [0, 1] radar axis: clamp((v - offset) / scale)
/// and, for lower-is-better dimensions, one minus that.
struct RadarScale {
  double offset = 0.0;
  double scale = 1.0;
};

struct MetricInfo {
  std::string_view id;
  std::string_view name;
  Aspect aspect;
  Direction direction;
  RadarScale radar;
  bool per_video;  // dataset score is the mean of a per-video breakdown
};

inline constexpr std::string_view kRadarTableVersion = "radar-v1";

// clang-format off
inline constexpr std::array<MetricInfo, 21> kMetricCatalog = {{
    {"G1", "subject_fidelity",       Aspect::kGeneration,     Direction::kHigherIsBetter, {0.0, 1.0},    false},
    {"G2", "subject_coherence",      Aspect::kGeneration,     Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"G3", "subject_consistency",    Aspect::kGeneration,     Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"G4", "depth_discrepancy",      Aspect::kGeneration,     Direction::kLowerIsBetter,  {0.0, 1.0},    true},
    {"G5", "temporal_consistency",   Aspect::kGeneration,     Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"G6", "semantic_consistency",   Aspect::kGeneration,     Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"G7", "perceptual_discrepancy", Aspect::kGeneration,     Direction::kLowerIsBetter,  {0.0, 1000.0}, false},
    {"G8", "cross_view_consistency", Aspect::kGeneration,     Direction::kHigherIsBetter, {0.0, 500.0},  true},
    {"R1", "photometric_discrepancy", Aspect::kReconstruction, Direction::kLowerIsBetter, {0.0, 1.0},    true},
    {"R2", "geometric_discrepancy",  Aspect::kReconstruction, Direction::kLowerIsBetter,  {0.0, 1.0},    true},
    {"R3", "novel_view_quality",     Aspect::kReconstruction, Direction::kHigherIsBetter, {0.0, 100.0},  false},
    {"R4", "novel_view_discrepancy", Aspect::kReconstruction, Direction::kLowerIsBetter,  {0.0, 1000.0}, false},
    {"A1", "displacement_error",     Aspect::kAction,         Direction::kLowerIsBetter,  {0.0, 2.0},    true},
    {"A2", "open_loop_pdms",         Aspect::kAction,         Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"A3", "route_completion",       Aspect::kAction,         Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"A4", "arena_driving_score",    Aspect::kAction,         Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"D1", "map_segmentation",       Aspect::kDownstream,     Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"D2", "object_detection",       Aspect::kDownstream,     Direction::kHigherIsBetter, {0.0, 1.0},    false},
    {"D3", "object_tracking",        Aspect::kDownstream,     Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"D4", "occupancy_prediction",   Aspect::kDownstream,     Direction::kHigherIsBetter, {0.0, 1.0},    true},
    {"H",  "human_preference",       Aspect::kHuman,          Direction::kHigherIsBetter, {1.0, 9.0},    false},
}};
// clang-format on

inline const MetricInfo* find_metric(std::string_view id) {
  for (const auto& m : kMetricCatalog)
    if (m.id == id) return &m;
  return nullptr;
}

inline const MetricInfo& metric_info(std::string_view id) {
  const auto* m = find_metric(id);
  require(m != nullptr, ErrorCode::kManifestError, "unknown metric id '" + std::string(id) + "'");
  return *m;
}

/// Catalog position, used to order report entries.
inline std::size_t metric_rank(std::string_view id) {
  for (std::size_t i = 0; i < kMetricCatalog.size(); ++i)
    if (kMetricCatalog[i].id == id) return i;
  return kMetricCatalog.size();
}

inline bool is_per_video_artifact_metric(std::string_view id) {
  static constexpr std::array<std::string_view, 12> kIds = {"G2", "G3", "G4", "G5", "G6", "R1",
                                                           "R2", "R3", "A1", "D1", "D3", "D4"};
  for (auto k : kIds)
    if (k == id) return true;
  return false;
}

}  // namespace wmeval

#endif  // WMEVAL_METRICS_HPP
