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

// In-memory artifact types and their conversions from WLT tensors and JSON.
// Field names of the JSON record formats are fixed here; docs/formats.md
// mirrors them.

#ifndef WMEVAL_INTERCHANGE_ARTIFACTS_HPP
#define WMEVAL_INTERCHANGE_ARTIFACTS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wmeval/error.hpp"
#include "wmeval/interchange/tensor.hpp"
#include "wmeval/numerics/image_quality.hpp"
#include "wmeval/numerics/matrix.hpp"

namespace wmeval {

using Json = nlohmann::json;
using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

inline constexpr double kNormTolerance = 1e-4;

// ---------------------------------------------------------------------------
// Tensor-backed artifacts

/// T x D per-frame feature vectors.
struct EmbeddingSequence {
  numerics::Matrix values;
  bool normalized = false;

  std::size_t frames() const { return values.rows(); }
  std::size_t dim() const { return values.cols(); }

  /// Index of the first row whose L2 norm is off unit length, if any.
  std::optional<std::size_t> first_unnormalized_row() const {
    for (std::size_t t = 0; t < frames(); ++t) {
      double s = 0.0;
      for (double v : values.row(t)) s += v * v;
      if (std::abs(std::sqrt(s) - 1.0) > kNormTolerance) return t;
    }
    return std::nullopt;
  }

  void check() const {
    require(frames() >= 1, ErrorCode::kInvariantViolation, "embedding sequence has no frames");
    if (normalized) {
      auto bad = first_unnormalized_row();
      require(!bad.has_value(), ErrorCode::kNormalizationMismatch,
              "row " + std::to_string(bad.value_or(0)) + " is not unit length");
    }
  }

  static EmbeddingSequence from_tensor(const TensorFile& t, bool normalized) {
    require(t.shape.size() == 2, ErrorCode::kShapeMismatch, "embedding tensor must be T x D");
    require(t.dtype == DType::kF32, ErrorCode::kInvariantViolation, "embedding tensor must be f32");
    EmbeddingSequence e;
    e.values = numerics::Matrix(t.shape[0], t.shape[1], t.as_doubles());
    e.normalized = normalized;
    e.check();
    return e;
  }

  TensorFile to_tensor() const {
    std::vector<float> v(values.data().begin(), values.data().end());
    return TensorFile::from<float>({values.rows(), values.cols()}, v);
  }
};

/// T x H x W integer label rasters.
struct LabelMaskSequence {
  std::size_t frames = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::uint16_t class_count = 0;
  std::vector<std::uint16_t> labels;

  std::size_t frame_size() const { return height * width; }
  std::span<const std::uint16_t> frame(std::size_t t) const {
    return {labels.data() + t * frame_size(), frame_size()};
  }

  /// First label >= class_count, if any.
  std::optional<std::uint16_t> first_out_of_range() const {
    for (auto l : labels)
      if (l >= class_count) return l;
    return std::nullopt;
  }

  void check() const {
    require(labels.size() == frames * height * width, ErrorCode::kInvariantViolation, "label raster size");
    auto bad = first_out_of_range();
    require(!bad.has_value(), ErrorCode::kLabelOutOfRange,
            "label " + std::to_string(bad.value_or(0)) + " >= class count " + std::to_string(class_count));
  }

  /// Accepts T x H x W (or H x W as a single frame) u16 or u8 tensors.
  static LabelMaskSequence from_tensor(const TensorFile& t, std::uint16_t class_count) {
    require(t.shape.size() == 3 || t.shape.size() == 2, ErrorCode::kShapeMismatch,
            "label tensor must be T x H x W");
    require(t.dtype != DType::kF32, ErrorCode::kInvariantViolation, "label tensor must be integer");
    LabelMaskSequence m;
    m.frames = t.shape.size() == 3 ? t.shape[0] : 1;
    m.height = t.shape[t.shape.size() - 2];
    m.width = t.shape[t.shape.size() - 1];
    m.class_count = class_count;
    if (t.dtype == DType::kU16) {
      m.labels = t.values<std::uint16_t>();
    } else {
      for (auto v : t.values<std::uint8_t>()) m.labels.push_back(v);
    }
    m.check();
    return m;
  }

  TensorFile to_tensor() const {
    return TensorFile::from<std::uint16_t>({frames, height, width}, labels);
  }
};

/// T x H x W depth in meters with an optional binary evaluation mask.
struct DepthFrameSet {
  std::size_t frames = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> depth;
  std::optional<std::vector<std::uint8_t>> valid_mask;

  std::size_t frame_size() const { return height * width; }

  void check() const {
    require(depth.size() == frames * height * width, ErrorCode::kInvariantViolation, "depth raster size");
    if (valid_mask) {
      require(valid_mask->size() == depth.size(), ErrorCode::kShapeMismatch, "mask size differs from depth");
      for (std::size_t i = 0; i < depth.size(); ++i) {
        auto m = (*valid_mask)[i];
        require(m <= 1, ErrorCode::kInvariantViolation, "mask is not binary");
        if (m) require(depth[i] >= 0.0, ErrorCode::kOutOfRange, "negative depth under mask");
      }
    }
  }

  static DepthFrameSet from_tensors(const TensorFile& depth, const std::optional<TensorFile>& mask) {
    require(depth.shape.size() == 3, ErrorCode::kShapeMismatch, "depth tensor must be T x H x W");
    require(depth.dtype == DType::kF32, ErrorCode::kInvariantViolation, "depth tensor must be f32");
    DepthFrameSet d;
    d.frames = depth.shape[0];
    d.height = depth.shape[1];
    d.width = depth.shape[2];
    d.depth = depth.as_doubles();
    if (mask) {
      require(mask->shape == depth.shape, ErrorCode::kShapeMismatch, "mask shape differs from depth");
      require(mask->dtype != DType::kF32, ErrorCode::kInvariantViolation, "mask must be integer");
      std::vector<std::uint8_t> bits;
      for (double v : mask->as_doubles()) {
        require(v == 0.0 || v == 1.0, ErrorCode::kInvariantViolation, "mask is not binary");
        bits.push_back(static_cast<std::uint8_t>(v));
      }
      d.valid_mask = std::move(bits);
    }
    d.check();
    return d;
  }
};

/// T x H x W x C images (C = 3 for RGB, 1 allowed) in [0, 1].
inline std::vector<numerics::Image> images_from_tensor(const TensorFile& t) {
  require(t.dtype == DType::kF32, ErrorCode::kInvariantViolation, "image tensor must be f32");
  require(t.shape.size() == 3 || t.shape.size() == 4, ErrorCode::kShapeMismatch,
          "image tensor must be T x H x W [x C]");
  std::size_t frames = t.shape[0], h = t.shape[1], w = t.shape[2];
  std::size_t ch = t.shape.size() == 4 ? t.shape[3] : 1;
  auto values = t.as_doubles();
  std::vector<numerics::Image> out;
  const std::size_t stride = h * w * ch;
  for (std::size_t f = 0; f < frames; ++f) {
    numerics::Image img(h, w, ch);
    std::copy(values.begin() + static_cast<std::ptrdiff_t>(f * stride),
              values.begin() + static_cast<std::ptrdiff_t>((f + 1) * stride), img.pixels.begin());
    out.push_back(std::move(img));
  }
  return out;
}

/// X x Y x Z semantic occupancy; label 0 is free space.
struct VoxelGrid {
  std::array<std::size_t, 3> dims{};
  Vec3 origin{};
  double voxel_size = 1.0;
  std::uint16_t class_count = 0;
  std::vector<std::uint16_t> labels;

  std::uint16_t at(std::size_t x, std::size_t y, std::size_t z) const {
    return labels[(x * dims[1] + y) * dims[2] + z];
  }
  std::uint16_t& at(std::size_t x, std::size_t y, std::size_t z) { return labels[(x * dims[1] + y) * dims[2] + z]; }

  bool same_geometry(const VoxelGrid& o) const {
    return dims == o.dims && origin == o.origin && voxel_size == o.voxel_size;
  }

  void check() const {
    require(voxel_size > 0.0, ErrorCode::kInvariantViolation, "voxel size must be positive");
    require(labels.size() == dims[0] * dims[1] * dims[2], ErrorCode::kInvariantViolation, "voxel count");
    for (auto l : labels)
      require(l < class_count, ErrorCode::kLabelOutOfRange, "voxel label >= class count");
  }

  /// Geometry JSON: {"origin": [x,y,z], "voxel_size": s, "class_count": C}
  static VoxelGrid from_tensor(const TensorFile& t, const Json& geometry) {
    require(t.shape.size() == 3, ErrorCode::kShapeMismatch, "voxel tensor must be X x Y x Z");
    require(t.dtype == DType::kU16, ErrorCode::kInvariantViolation, "voxel tensor must be u16");
    VoxelGrid g;
    g.dims = {t.shape[0], t.shape[1], t.shape[2]};
    g.origin = geometry.at("origin").get<Vec3>();
    g.voxel_size = geometry.at("voxel_size").get<double>();
    g.class_count = geometry.at("class_count").get<std::uint16_t>();
    g.labels = t.values<std::uint16_t>();
    g.check();
    return g;
  }
};

// ---------------------------------------------------------------------------
// JSON record artifacts

/// One 3D box observation, also used for tracker outputs and ground truth.
struct TrackedBox {
  std::size_t frame_index = 0;
  std::int64_t track_id = 0;
  std::uint16_t class_id = 0;
  Vec3 center{};
  Vec3 size{1.0, 1.0, 1.0};
  double yaw = 0.0;
  double confidence = 1.0;
  std::optional<Vec2> velocity;
};

inline void from_json(const Json& j, TrackedBox& b) {
  b.frame_index = j.at("frame").get<std::size_t>();
  b.track_id = j.at("track_id").get<std::int64_t>();
  b.class_id = j.value("class_id", std::uint16_t{0});
  b.center = j.at("center").get<Vec3>();
  b.size = j.value("size", Vec3{1.0, 1.0, 1.0});
  b.yaw = j.value("yaw", 0.0);
  b.confidence = j.value("confidence", 1.0);
  if (j.contains("velocity")) b.velocity = j.at("velocity").get<Vec2>();
}

inline void to_json(Json& j, const TrackedBox& b) {
  j = Json{{"frame", b.frame_index}, {"track_id", b.track_id}, {"class_id", b.class_id},
           {"center", b.center},     {"size", b.size},         {"yaw", b.yaw},
           {"confidence", b.confidence}};
  if (b.velocity) j["velocity"] = *b.velocity;
}

struct TrackedBoxSet {
  std::vector<TrackedBox> entries;

  void check() const {
    std::set<std::pair<std::size_t, std::int64_t>> seen;
    for (const auto& b : entries) {
      for (double s : b.size) require(s > 0.0, ErrorCode::kInvariantViolation, "box size must be positive");
      require(b.confidence >= 0.0 && b.confidence <= 1.0, ErrorCode::kOutOfRange, "box confidence outside [0,1]");
      require(seen.emplace(b.frame_index, b.track_id).second, ErrorCode::kInvariantViolation,
              "duplicate (frame, track_id) pair");
    }
  }

  static TrackedBoxSet from_json_array(const Json& j) {
    require(j.is_array(), ErrorCode::kParseError, "box set must be a JSON array");
    TrackedBoxSet s;
    s.entries = j.get<std::vector<TrackedBox>>();
    s.check();
    return s;
  }
};

/// T_p x 2 ground-plane waypoints in meters.
struct Trajectory {
  std::vector<Vec2> waypoints;

  void check() const {
    require(!waypoints.empty(), ErrorCode::kInvariantViolation, "trajectory has no waypoints");
    for (const auto& w : waypoints)
      require(std::isfinite(w[0]) && std::isfinite(w[1]), ErrorCode::kInvariantViolation,
              "non-finite waypoint");
  }
};

/// Paired planner outputs for one video: {"gen": [[x,y],...], "gt": [[x,y],...]}
struct TrajectoryPair {
  Trajectory gen;
  Trajectory gt;

  static TrajectoryPair from_json(const Json& j) {
    TrajectoryPair p;
    p.gen.waypoints = j.at("gen").get<std::vector<Vec2>>();
    p.gt.waypoints = j.at("gt").get<std::vector<Vec2>>();
    p.gen.check();
    p.gt.check();
    return p;
  }
};

using CameraPair = std::pair<int, int>;

struct MatchRecord {
  std::string video_id;
  std::size_t frame_index = 0;
  CameraPair camera_pair{};
  std::vector<double> confidences;
};

inline void from_json(const Json& j, MatchRecord& r) {
  r.video_id = j.at("video_id").get<std::string>();
  r.frame_index = j.at("frame").get<std::size_t>();
  auto pair = j.at("camera_pair").get<std::array<int, 2>>();
  r.camera_pair = {pair[0], pair[1]};
  r.confidences = j.at("confidences").get<std::vector<double>>();
}

inline void to_json(Json& j, const MatchRecord& r) {
  j = Json{{"video_id", r.video_id},
           {"frame", r.frame_index},
           {"camera_pair", std::array<int, 2>{r.camera_pair.first, r.camera_pair.second}},
           {"confidences", r.confidences}};
}

struct MatchRecordSet {
  std::vector<MatchRecord> records;

  void check() const {
    for (const auto& r : records)
      for (double c : r.confidences)
        require(c >= 0.0 && c <= 1.0, ErrorCode::kOutOfRange, "match confidence outside [0,1]");
  }

  static MatchRecordSet from_json_array(const Json& j) {
    require(j.is_array(), ErrorCode::kParseError, "match records must be a JSON array");
    MatchRecordSet s;
    s.records = j.get<std::vector<MatchRecord>>();
    s.check();
    return s;
  }
};

// ---------------------------------------------------------------------------
// File access. Every file read in the engine goes through these helpers.

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIoFailure, "cannot open " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorCode::kIoFailure, "write failed for " + path.string());
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kParseError, origin + ": " + e.what());
  }
}

inline Json read_json_file(const std::filesystem::path& path) {
  return parse_json_text(read_text_file(path), path.string());
}

/// Newline-delimited JSON; blank lines are skipped.
inline std::vector<Json> read_jsonl_file(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_json_text(line, path.string() + ":" + std::to_string(lineno)));
  }
  return out;
}

}  // namespace wmeval

#endif  // WMEVAL_INTERCHANGE_ARTIFACTS_HPP
