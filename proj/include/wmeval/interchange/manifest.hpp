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

// Evaluation manifests: which videos, which metrics, and where every input
// artifact lives. All relative paths resolve against the manifest directory.

#ifndef WMEVAL_INTERCHANGE_MANIFEST_HPP
#define WMEVAL_INTERCHANGE_MANIFEST_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wmeval/error.hpp"
#include "wmeval/interchange/artifacts.hpp"
#include "wmeval/metrics.hpp"

namespace wmeval {

struct ObjectClass {
  std::uint16_t id = 0;
  std::string name;
  double threshold = 0.0;  // minimum detection confidence kept for track embeddings
};

struct ClassTables {
  std::vector<ObjectClass> objects;
  std::uint16_t semantic_count = 0;
  std::uint16_t bev_count = 0;
  std::vector<std::uint16_t> bev_evaluated;  // empty means all
  std::uint16_t occupancy_count = 0;

  const ObjectClass* object(std::uint16_t id) const {
    for (const auto& c : objects)
      if (c.id == id) return &c;
    return nullptr;
  }
};

/// Default confidence filters for track embeddings, keyed by class name.
inline double default_object_threshold(const std::string& name) {
  if (name == "vehicle") return 0.25;
  if (name == "pedestrian") return 0.50;
  return 0.0;
}

struct VideoEntry {
  std::string id;
  std::string gt_id;
  std::size_t frames = 0;
  Json artifacts = Json::object();  // metric id -> path or object of paths
};

struct ManifestIssue {
  std::string metric;
  std::string video;  // empty for dataset-level artifacts
  std::string message;
};

struct EvaluationManifest {
  std::filesystem::path source;
  std::string run_id;
  std::string model_id;
  std::vector<std::string> metrics;  // declared, catalog order
  int camera_count = 6;
  std::vector<CameraPair> camera_pairs;
  ClassTables classes;
  std::vector<VideoEntry> videos;    // sorted by id
  Json dataset = Json::object();     // metric id -> path or object of paths
  std::vector<ManifestIssue> issues;  // unsatisfied artifact requirements

  const VideoEntry* video(const std::string& id) const {
    for (const auto& v : videos)
      if (v.id == id) return &v;
    return nullptr;
  }

  bool satisfied(const std::string& metric) const {
    return std::none_of(issues.begin(), issues.end(), [&](const auto& i) { return i.metric == metric; });
  }
};

/// Adjacent pairs of an n-camera ring: (0,1), (1,2), ..., (n-1,0).
inline std::vector<CameraPair> ring_camera_pairs(int n) {
  std::vector<CameraPair> pairs;
  for (int i = 0; i < n; ++i) pairs.emplace_back(i, (i + 1) % n);
  return pairs;
}

namespace detail {

inline void resolve_paths(Json& node, const std::filesystem::path& base) {
  if (node.is_string()) {
    std::filesystem::path p = node.get<std::string>();
    if (p.is_relative()) p = base / p;
    node = p.lexically_normal().string();
  } else if (node.is_object() || node.is_array()) {
    for (auto& child : node) resolve_paths(child, base);
  }
}

// Required artifact keys per metric. An empty list means the entry itself is
// a single path.
inline std::vector<std::string> required_keys(const std::string& metric) {
  if (metric == "G2") return {"embeddings", "boxes"};
  if (metric == "G3" || metric == "G5") return {"gen", "ref"};
  if (metric == "G7") return {"real", "gen"};
  if (metric == "R1") return {"rendered", "reference"};
  if (metric == "R2" || metric == "D1") return {"pred", "gt"};
  if (metric == "D4") return {"pred", "gt", "geometry", "rays"};
  return {};
}

inline void check_entry(const std::string& metric, const std::string& video, const Json* entry,
                        std::vector<ManifestIssue>& issues) {
  auto missing = [&](const std::string& what) {
    issues.push_back({metric, video, what});
  };
  if (entry == nullptr) {
    missing("no artifact declared");
    return;
  }
  auto check_path = [&](const Json& p, const std::string& key) {
    if (!p.is_string()) {
      missing(key + " is not a path");
      return;
    }
    if (!std::filesystem::exists(p.get<std::string>())) missing(key + " not found: " + p.get<std::string>());
  };
  if (metric == "R4") {
    if (!entry->is_object() || entry->empty()) {
      missing("no novel-view conditions declared");
      return;
    }
    for (const auto& [cond, sides] : entry->items()) {
      for (const char* side : {"real", "gen"}) {
        if (!sides.is_object() || !sides.contains(side))
          missing(cond + "." + side + " missing");
        else
          check_path(sides.at(side), cond + "." + side);
      }
    }
    return;
  }
  auto keys = required_keys(metric);
  if (keys.empty()) {
    check_path(*entry, "path");
    return;
  }
  if (!entry->is_object()) {
    missing("expected an object with keys");
    return;
  }
  for (const auto& k : keys) {
    if (!entry->contains(k))
      missing(k + " missing");
    else
      check_path(entry->at(k), k);
  }
  for (const auto& [k, v] : entry->items())
    if (v.is_string() && std::find(keys.begin(), keys.end(), k) == keys.end()) check_path(v, k);
}

}  // namespace detail

/// Requirement check for one metric against a parsed manifest.
inline std::vector<ManifestIssue> check_metric_artifacts(const EvaluationManifest& m, const std::string& metric) {
  std::vector<ManifestIssue> issues;
  if (is_per_video_artifact_metric(metric)) {
    if (m.videos.empty()) issues.push_back({metric, "", "manifest has no videos"});
    for (const auto& v : m.videos) {
      const Json* entry = v.artifacts.contains(metric) ? &v.artifacts.at(metric) : nullptr;
      detail::check_entry(metric, v.id, entry, issues);
    }
  } else {
    const Json* entry = m.dataset.contains(metric) ? &m.dataset.at(metric) : nullptr;
    detail::check_entry(metric, "", entry, issues);
  }
  return issues;
}

/// Parses and validates a manifest document. With `strict`, any declared
/// metric lacking an artifact raises MissingArtifact; otherwise the gaps are
/// recorded in `issues` for the caller to report.
inline EvaluationManifest parse_manifest(const Json& doc, const std::filesystem::path& base_dir, bool strict = true) {
  EvaluationManifest m;
  try {
    require(doc.is_object(), ErrorCode::kParseError, "manifest must be a JSON object");
    m.run_id = doc.value("run_id", std::string("run"));
    m.model_id = doc.value("model_id", std::string("model"));
    m.camera_count = doc.value("camera_count", 6);
    if (doc.contains("camera_pairs")) {
      for (const auto& p : doc.at("camera_pairs")) {
        auto pr = p.get<std::array<int, 2>>();
        m.camera_pairs.emplace_back(pr[0], pr[1]);
      }
    } else {
      m.camera_pairs = ring_camera_pairs(m.camera_count);
    }

    const Json classes = doc.value("classes", Json::object());
    if (classes.contains("objects")) {
      for (const auto& c : classes.at("objects")) {
        ObjectClass oc;
        oc.id = c.at("id").get<std::uint16_t>();
        oc.name = c.at("name").get<std::string>();
        oc.threshold = c.value("threshold", default_object_threshold(oc.name));
        m.classes.objects.push_back(oc);
      }
    } else {
      m.classes.objects = {{0, "vehicle", 0.25}, {1, "pedestrian", 0.50}};
    }
    m.classes.semantic_count = classes.value("semantic_count", std::uint16_t{0});
    m.classes.occupancy_count = classes.value("occupancy_count", std::uint16_t{0});
    if (classes.contains("bev")) {
      m.classes.bev_count = classes.at("bev").value("count", std::uint16_t{0});
      m.classes.bev_evaluated = classes.at("bev").value("evaluated", std::vector<std::uint16_t>{});
    }

    for (const auto& v : doc.value("videos", Json::array())) {
      VideoEntry e;
      e.id = v.at("id").get<std::string>();
      e.gt_id = v.value("gt_id", e.id);
      e.frames = v.value("frames", std::size_t{0});
      e.artifacts = v.value("artifacts", Json::object());
      detail::resolve_paths(e.artifacts, base_dir);
      m.videos.push_back(std::move(e));
    }
    m.dataset = doc.value("dataset", Json::object());
    detail::resolve_paths(m.dataset, base_dir);

    for (const auto& id : doc.value("metrics", std::vector<std::string>{})) {
      require(find_metric(id) != nullptr, ErrorCode::kParseError, "unknown metric id '" + id + "'");
      if (std::find(m.metrics.begin(), m.metrics.end(), id) == m.metrics.end()) m.metrics.push_back(id);
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, std::string("manifest schema: ") + e.what());
  }

  std::sort(m.metrics.begin(), m.metrics.end(),
            [](const auto& a, const auto& b) { return metric_rank(a) < metric_rank(b); });
  std::sort(m.videos.begin(), m.videos.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < m.videos.size(); ++i)
    require(m.videos[i].id != m.videos[i - 1].id, ErrorCode::kDanglingReference,
            "duplicate video id '" + m.videos[i].id + "'");
  for (const auto& [a, b] : m.camera_pairs)
    require(a >= 0 && b >= 0 && a < m.camera_count && b < m.camera_count && a != b,
            ErrorCode::kDanglingReference,
            "camera pair (" + std::to_string(a) + "," + std::to_string(b) + ") outside the camera ring");
  for (const auto& c : m.classes.bev_evaluated)
    require(c < m.classes.bev_count, ErrorCode::kDanglingReference, "evaluated BEV class outside class table");

  for (const auto& metric : m.metrics) {
    auto issues = check_metric_artifacts(m, metric);
    if (strict && !issues.empty()) {
      const auto& first = issues.front();
      fail(ErrorCode::kMissingArtifact, "metric " + first.metric + (first.video.empty() ? "" : ", video " + first.video) +
                                            ": " + first.message);
    }
    m.issues.insert(m.issues.end(), issues.begin(), issues.end());
  }
  return m;
}

inline EvaluationManifest load_manifest(const std::filesystem::path& path, bool strict = true) {
  auto doc = read_json_file(path);
  auto m = parse_manifest(doc, path.parent_path(), strict);
  m.source = path;
  return m;
}

}  // namespace wmeval

#endif  // WMEVAL_INTERCHANGE_MANIFEST_HPP
