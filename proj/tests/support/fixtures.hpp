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

// Seeded random inputs and a synthetic on-disk corpus covering every metric.

#ifndef WMEVAL_TESTS_SUPPORT_FIXTURES_HPP
#define WMEVAL_TESTS_SUPPORT_FIXTURES_HPP

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "wmeval/wmeval.hpp"

namespace fixtures {

using wmeval::Json;
using wmeval::numerics::Matrix;

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("wmeval_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal(double mean = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mean, sd)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (auto& v : m.data()) v = rng.normal(0.0, scale);
  return m;
}

/// Rows of unit length that drift slowly, like per-frame embeddings.
inline Matrix unit_walk(Rng& rng, std::size_t rows, std::size_t cols, double step = 0.2) {
  Matrix m(rows, cols);
  std::vector<double> cur(cols);
  for (auto& v : cur) v = rng.normal();
  for (std::size_t t = 0; t < rows; ++t) {
    if (t > 0)
      for (auto& v : cur) v += rng.normal(0.0, step);
    double n = 0.0;
    for (double v : cur) n += v * v;
    n = std::sqrt(n);
    for (std::size_t k = 0; k < cols; ++k) m(t, k) = cur[k] / n;
  }
  return m;
}

inline wmeval::TensorFile f32_tensor(const std::vector<std::uint64_t>& shape, const std::vector<double>& values) {
  std::vector<float> f(values.begin(), values.end());
  return wmeval::TensorFile::from<float>(shape, f);
}

inline wmeval::TensorFile matrix_tensor(const Matrix& m) {
  return f32_tensor({m.rows(), m.cols()}, std::vector<double>(m.data().begin(), m.data().end()));
}

/// Random label frames built from a background class and a few rectangles.
inline std::vector<std::uint16_t> blob_frames(Rng& rng, std::size_t frames, std::size_t h, std::size_t w,
                                              int classes, int rects) {
  std::vector<std::uint16_t> out(frames * h * w, 0);
  for (std::size_t t = 0; t < frames; ++t) {
    auto* f = out.data() + t * h * w;
    for (int k = 0; k < rects; ++k) {
      int r0 = rng.integer(0, static_cast<int>(h) - 1), c0 = rng.integer(0, static_cast<int>(w) - 1);
      int rh = rng.integer(1, static_cast<int>(h) / 2 + 1), cw = rng.integer(1, static_cast<int>(w) / 2 + 1);
      auto cls = static_cast<std::uint16_t>(rng.integer(0, classes - 1));
      for (std::size_t r = static_cast<std::size_t>(r0); r < std::min(h, static_cast<std::size_t>(r0 + rh)); ++r)
        for (std::size_t c = static_cast<std::size_t>(c0); c < std::min(w, static_cast<std::size_t>(c0 + cw)); ++c)
          f[r * w + c] = cls;
    }
  }
  return out;
}

struct CorpusOptions {
  std::size_t videos = 2;
  std::size_t frames = 4;
  std::uint64_t seed = 7;
};

inline std::string video_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "video_%02zu", i);
  return buf;
}

/// Writes a self-consistent corpus under `dir` with artifacts for all 21
/// dimensions and returns the manifest path.
inline std::filesystem::path write_corpus(const std::filesystem::path& dir, const CorpusOptions& opt = {}) {
  namespace fs = std::filesystem;
  using namespace wmeval;
  fs::create_directories(dir);
  Rng rng(opt.seed);
  const std::size_t T = opt.frames;

  Json videos = Json::array();
  Json g1 = Json::array(), g8 = Json::array();
  const std::vector<std::string> conditions = {"front_center_interp", "s_curve", "lateral_offset_left",
                                               "lateral_offset_right"};

  for (std::size_t v = 0; v < opt.videos; ++v) {
    const std::string id = video_name(v);
    const fs::path vd = dir / id;
    fs::create_directories(vd);
    Json art = Json::object();

    // G2: two vehicle tracks and one pedestrian track over all frames.
    {
      std::vector<TrackedBox> boxes;
      Matrix rows(3 * T, 8);
      std::size_t row = 0;
      for (int track = 0; track < 3; ++track) {
        Matrix walk = unit_walk(rng, T, 8, 0.1);
        for (std::size_t t = 0; t < T; ++t, ++row) {
          for (std::size_t k = 0; k < 8; ++k) rows(row, k) = walk(t, k);
          TrackedBox b;
          b.frame_index = t;
          b.track_id = track;
          b.class_id = track == 2 ? 1 : 0;
          b.center = {rng.uniform(-20, 20), rng.uniform(-20, 20), 0.0};
          b.confidence = rng.uniform(0.55, 1.0);
          boxes.push_back(b);
        }
      }
      write_tensor(matrix_tensor(rows), vd / "g2_embeddings.wlt");
      write_text_file(vd / "g2_boxes.json", Json(boxes).dump());
      art["G2"] = {{"embeddings", id + "/g2_embeddings.wlt"}, {"boxes", id + "/g2_boxes.json"}};
    }
    // G3, G5: paired embedding walks.
    for (const char* metric : {"G3", "G5"}) {
      std::string m = metric;
      write_tensor(matrix_tensor(unit_walk(rng, T, 16)), vd / (m + "_gen.wlt"));
      write_tensor(matrix_tensor(unit_walk(rng, T, 16)), vd / (m + "_ref.wlt"));
      art[m] = {{"gen", id + "/" + m + "_gen.wlt"}, {"ref", id + "/" + m + "_ref.wlt"}, {"normalized", true}};
    }
    // G4: unnormalized depth features.
    write_tensor(matrix_tensor(random_matrix(rng, T, 8)), vd / "g4.wlt");
    art["G4"] = id + "/g4.wlt";
    // G6: semantic masks with three classes.
    {
      auto labels = blob_frames(rng, T, 16, 16, 3, 4);
      write_tensor(TensorFile::from<std::uint16_t>({T, 16, 16}, labels), vd / "g6_masks.wlt");
      art["G6"] = id + "/g6_masks.wlt";
    }
    // R1: render pairs with perceptual distances.
    {
      std::vector<double> ref(2 * 16 * 16 * 3), ren(ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i) {
        ref[i] = rng.uniform();
        ren[i] = std::clamp(ref[i] + rng.normal(0.0, 0.05), 0.0, 1.0);
      }
      write_tensor(f32_tensor({2, 16, 16, 3}, ren), vd / "r1_rendered.wlt");
      write_tensor(f32_tensor({2, 16, 16, 3}, ref), vd / "r1_reference.wlt");
      write_text_file(vd / "r1_lpips.json", Json({rng.uniform(0.1, 0.4), rng.uniform(0.1, 0.4)}).dump());
      art["R1"] = {{"rendered", id + "/r1_rendered.wlt"},
                   {"reference", id + "/r1_reference.wlt"},
                   {"lpips", id + "/r1_lpips.json"}};
    }
    // R2: depth with a central mask.
    {
      std::vector<double> gt(2 * 8 * 8), pred(gt.size());
      std::vector<std::uint8_t> mask(gt.size(), 0);
      for (std::size_t i = 0; i < gt.size(); ++i) {
        gt[i] = rng.uniform(2.0, 40.0);
        pred[i] = gt[i] * rng.uniform(0.8, 1.25);
        std::size_t r = (i / 8) % 8, c = i % 8;
        mask[i] = r >= 2 && r < 6 && c >= 2 && c < 6;
      }
      write_tensor(f32_tensor({2, 8, 8}, pred), vd / "r2_pred.wlt");
      write_tensor(f32_tensor({2, 8, 8}, gt), vd / "r2_gt.wlt");
      write_tensor(TensorFile::from<std::uint8_t>({2, 8, 8}, mask), vd / "r2_mask.wlt");
      art["R2"] = {{"pred", id + "/r2_pred.wlt"}, {"gt", id + "/r2_gt.wlt"}, {"mask", id + "/r2_mask.wlt"}};
    }
    // R3: per-condition quality scores.
    {
      Json q = Json::object();
      for (const auto& c : conditions) q[c] = {rng.uniform(30, 50), rng.uniform(30, 50), rng.uniform(30, 50)};
      write_text_file(vd / "r3_quality.json", q.dump());
      art["R3"] = id + "/r3_quality.json";
    }
    // A1: planner waypoints.
    {
      Json gen = Json::array(), gt = Json::array();
      for (int t = 0; t < 6; ++t) {
        gt.push_back({2.0 * t, 0.1 * t});
        gen.push_back({2.0 * t + rng.normal(0, 0.5), 0.1 * t + rng.normal(0, 0.5)});
      }
      write_text_file(vd / "a1_traj.json", Json{{"gen", gen}, {"gt", gt}}.dump());
      art["A1"] = id + "/a1_traj.json";
    }
    // D1: BEV maps.
    {
      auto gt = blob_frames(rng, 2, 12, 12, 3, 3);
      auto pred = gt;
      for (auto& l : pred)
        if (rng.uniform() < 0.1) l = static_cast<std::uint16_t>(rng.integer(0, 2));
      write_tensor(TensorFile::from<std::uint16_t>({2, 12, 12}, pred), vd / "d1_pred.wlt");
      write_tensor(TensorFile::from<std::uint16_t>({2, 12, 12}, gt), vd / "d1_gt.wlt");
      art["D1"] = {{"pred", id + "/d1_pred.wlt"}, {"gt", id + "/d1_gt.wlt"}};
    }
    // D3: tracking log with two objects and a noisy tracker.
    {
      Json gt = Json::array(), pred = Json::array();
      for (std::size_t t = 0; t < 6; ++t)
        for (int obj = 0; obj < 2; ++obj) {
          const double x = 10.0 * obj + 1.0 * static_cast<double>(t), y = 5.0 * obj;
          gt.push_back({{"frame", t}, {"track_id", obj}, {"center", {x, y, 0.0}}});
          if (rng.uniform() < 0.85)
            pred.push_back({{"frame", t},
                            {"track_id", obj + 10},
                            {"center", {x + rng.normal(0, 0.5), y + rng.normal(0, 0.5), 0.0}},
                            {"confidence", rng.uniform(0.3, 1.0)}});
        }
      write_text_file(vd / "d3_tracks.json", Json{{"gt", gt}, {"pred", pred}}.dump());
      art["D3"] = id + "/d3_tracks.json";
    }
    // D4: occupancy grids and rays.
    {
      std::vector<std::uint16_t> gt(8 * 8 * 8, 0);
      for (auto& l : gt) l = rng.uniform() < 0.15 ? static_cast<std::uint16_t>(rng.integer(1, 2)) : 0;
      auto pred = gt;
      for (auto& l : pred)
        if (rng.uniform() < 0.1) l = static_cast<std::uint16_t>(rng.integer(0, 2));
      write_tensor(TensorFile::from<std::uint16_t>({8, 8, 8}, pred), vd / "d4_pred.wlt");
      write_tensor(TensorFile::from<std::uint16_t>({8, 8, 8}, gt), vd / "d4_gt.wlt");
      write_text_file(vd / "d4_geometry.json",
                      Json{{"origin", {0.0, 0.0, 0.0}}, {"voxel_size", 0.5}, {"class_count", 3}}.dump());
      Json rays = Json::array();
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          rays.push_back({{"origin", {-1.0, 0.25 + 0.5 * i, 0.25 + 0.5 * j}}, {"direction", {1.0, 0.0, 0.0}},
                          {"max_range", 10.0}});
      write_text_file(vd / "d4_rays.json", rays.dump());
      art["D4"] = {{"pred", id + "/d4_pred.wlt"},
                   {"gt", id + "/d4_gt.wlt"},
                   {"geometry", id + "/d4_geometry.json"},
                   {"rays", id + "/d4_rays.json"}};
    }

    // Dataset-level records that reference this video.
    for (std::size_t t = 0; t < T; ++t) {
      for (int k = 0; k < 3; ++k)
        g1.push_back({{"video_id", id}, {"frame", t}, {"track_id", k}, {"class_id", k == 2 ? 1 : 0},
                      {"confidence", rng.uniform(0.2, 0.95)}});
      for (int cam = 0; cam < 6; ++cam) {
        Json conf = Json::array();
        const int n = rng.integer(0, 5);
        for (int m = 0; m < n; ++m) conf.push_back(rng.uniform());
        g8.push_back({{"video_id", id}, {"frame", t}, {"camera_pair", {cam, (cam + 1) % 6}}, {"confidences", conf}});
      }
    }
    videos.push_back({{"id", id}, {"gt_id", id + "_gt"}, {"frames", T}, {"artifacts", art}});
  }

  Json dataset = Json::object();
  write_text_file(dir / "g1_confidences.json", g1.dump());
  dataset["G1"] = "g1_confidences.json";
  write_text_file(dir / "g8_matches.json", g8.dump());
  dataset["G8"] = "g8_matches.json";
  write_tensor(matrix_tensor(random_matrix(rng, 40, 4)), dir / "g7_real.wlt");
  Matrix gen = random_matrix(rng, 40, 4);
  for (auto& x : gen.data()) x += 0.3;
  write_tensor(matrix_tensor(gen), dir / "g7_gen.wlt");
  dataset["G7"] = {{"real", "g7_real.wlt"}, {"gen", "g7_gen.wlt"}};
  Json r4 = Json::object();
  for (const auto& c : conditions) {
    write_tensor(matrix_tensor(random_matrix(rng, 30, 3)), dir / ("r4_" + c + "_real.wlt"));
    write_tensor(matrix_tensor(random_matrix(rng, 30, 3, 1.3)), dir / ("r4_" + c + "_gen.wlt"));
    r4[c] = {{"real", "r4_" + c + "_real.wlt"}, {"gen", "r4_" + c + "_gen.wlt"}};
  }
  dataset["R4"] = r4;
  Json episodes = Json::array();
  for (int e = 0; e < 5; ++e)
    episodes.push_back({{"episode_id", "ep_" + std::to_string(e)},
                        {"nc", rng.uniform() < 0.8 ? 1.0 : 0.0},
                        {"dac", 1.0},
                        {"ep", rng.uniform()},
                        {"ttc", rng.uniform()},
                        {"comfort", rng.uniform()},
                        {"d_completed", rng.uniform(10, 100)},
                        {"d_total", 100.0}});
  write_text_file(dir / "episodes.json", episodes.dump());
  for (const char* m : {"A2", "A3", "A4"}) dataset[m] = "episodes.json";
  write_text_file(dir / "d2_summary.json",
                  Json{{"mAP", 0.3657}, {"mATE", 0.7356}, {"mASE", 0.2919}, {"mAOE", 0.44}, {"mAVE", 0.6821},
                       {"mAAE", 0.2072}}
                      .dump());
  dataset["D2"] = "d2_summary.json";
  {
    std::string lines;
    for (std::size_t v = 0; v < opt.videos; ++v)
      for (auto dim : preference::kDimensions)
        for (const char* g : {"A", "B"})
          lines += Json{{"video_id", video_name(v)}, {"model_id", "synthetic"}, {"dimension", std::string(dim)},
                        {"group_id", g}, {"score", rng.integer(1, 10)}, {"rationale", "stable geometry and lighting"}}
                       .dump() +
                   "\n";
    write_text_file(dir / "h_records.jsonl", lines);
    dataset["H"] = "h_records.jsonl";
  }

  Json metrics = Json::array();
  for (const auto& m : kMetricCatalog) metrics.push_back(std::string(m.id));
  Json manifest = {{"run_id", "synthetic-run"},
                   {"model_id", "synthetic"},
                   {"camera_count", 6},
                   {"classes",
                    {{"objects", {{{"id", 0}, {"name", "vehicle"}}, {{"id", 1}, {"name", "pedestrian"}}}},
                     {"semantic_count", 3},
                     {"occupancy_count", 3},
                     {"bev", {{"count", 3}, {"evaluated", {1, 2}}}}}},
                   {"videos", videos},
                   {"dataset", dataset},
                   {"metrics", metrics}};
  const auto path = dir / "manifest.json";
  write_text_file(path, manifest.dump(2));
  return path;
}

}  // namespace fixtures

#endif  // WMEVAL_TESTS_SUPPORT_FIXTURES_HPP
