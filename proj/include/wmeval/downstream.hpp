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

// Downstream perception scores on generated scenes: BEV segmentation IoU,
// nuScenes-style detection and tracking summaries, and ray-based occupancy IoU.

#ifndef WMEVAL_DOWNSTREAM_HPP
#define WMEVAL_DOWNSTREAM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wmeval/error.hpp"
#include "wmeval/interchange/artifacts.hpp"
#include "wmeval/numerics/statistics.hpp"

namespace wmeval::downstream {

// ---------------------------------------------------------------------------
// BEV map segmentation

struct BevResult {
  double miou = 0.0;                         // mean over frames, then videos
  std::map<std::uint16_t, double> per_class;  // mean over frames where the class has a nonempty union
};

/// Per-frame class IoUs over `classes` (all classes when empty). A class with
/// an empty union in a frame is left out of that frame's mean; a frame with
/// no such class at all is left out of the video mean.
inline BevResult video_bev_miou(const LabelMaskSequence& pred, const LabelMaskSequence& gt,
                                std::span<const std::uint16_t> classes) {
  require(pred.frames == gt.frames && pred.height == gt.height && pred.width == gt.width, ErrorCode::kShapeMismatch,
          "BEV prediction and reference differ in shape");
  std::vector<std::uint16_t> eval(classes.begin(), classes.end());
  if (eval.empty())
    for (std::uint16_t c = 0; c < std::max(pred.class_count, gt.class_count); ++c) eval.push_back(c);

  std::map<std::uint16_t, std::pair<double, std::size_t>> class_acc;
  double frame_sum = 0.0;
  std::size_t frames_used = 0;
  for (std::size_t t = 0; t < gt.frames; ++t) {
    auto p = pred.frame(t), g = gt.frame(t);
    double iou_sum = 0.0;
    std::size_t used = 0;
    for (auto c : eval) {
      std::size_t inter = 0, uni = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const bool a = p[i] == c, b = g[i] == c;
        inter += a && b;
        uni += a || b;
      }
      if (uni == 0) continue;
      const double iou = static_cast<double>(inter) / static_cast<double>(uni);
      iou_sum += iou;
      ++used;
      class_acc[c].first += iou;
      class_acc[c].second += 1;
    }
    if (used == 0) continue;
    frame_sum += iou_sum / static_cast<double>(used);
    ++frames_used;
  }
  require(frames_used > 0, ErrorCode::kEmptyMasks, "no evaluated class appears in any frame");
  BevResult r;
  r.miou = frame_sum / static_cast<double>(frames_used);
  for (const auto& [c, acc] : class_acc) r.per_class[c] = acc.first / static_cast<double>(acc.second);
  return r;
}

inline BevResult bev_miou(std::span<const BevResult> per_video) {
  require(!per_video.empty(), ErrorCode::kEmptyInput, "no videos");
  BevResult out;
  std::map<std::uint16_t, std::pair<double, std::size_t>> acc;
  for (const auto& v : per_video) {
    out.miou += v.miou;
    for (const auto& [c, iou] : v.per_class) {
      acc[c].first += iou;
      acc[c].second += 1;
    }
  }
  out.miou /= static_cast<double>(per_video.size());
  for (const auto& [c, a] : acc) out.per_class[c] = a.first / static_cast<double>(a.second);
  return out;
}

// ---------------------------------------------------------------------------
// Detection score

inline constexpr std::string_view kDetectionProtocol = "nuScenes detection score";
inline constexpr std::string_view kTrackingProtocol = "nuScenes AMOTA (greedy center distance, 2 m, 40 recall points)";

struct DetectionSummary {
  double m_ap = 0.0;
  double m_ate = 0.0;
  double m_ase = 0.0;
  double m_aoe = 0.0;
  double m_ave = 0.0;
  double m_aae = 0.0;

  std::array<double, 5> errors() const { return {m_ate, m_ase, m_aoe, m_ave, m_aae}; }

  void check() const {
    require(m_ap >= 0.0 && m_ap <= 1.0, ErrorCode::kOutOfRange, "mAP outside [0,1]");
    for (double e : errors()) require(e >= 0.0 && std::isfinite(e), ErrorCode::kOutOfRange, "negative TP error");
  }
};

inline void from_json(const Json& j, DetectionSummary& d) {
  d.m_ap = j.at("mAP").get<double>();
  d.m_ate = j.at("mATE").get<double>();
  d.m_ase = j.at("mASE").get<double>();
  d.m_aoe = j.at("mAOE").get<double>();
  d.m_ave = j.at("mAVE").get<double>();
  d.m_aae = j.at("mAAE").get<double>();
}

inline double nds(const DetectionSummary& d) {
  d.check();
  double s = 5.0 * d.m_ap;
  for (double e : d.errors()) s += 1.0 - std::min(1.0, e);
  return s / 10.0;
}

// ---------------------------------------------------------------------------
// Tracking

struct TrackingConfig {
  std::size_t recall_points = 40;
  double match_distance = 2.0;  // meters, ground-plane center distance
};

/// Ground-truth boxes carry object ids in `track_id`; predictions carry
/// tracker ids and confidences.
struct TrackingLog {
  std::vector<TrackedBox> gt;
  std::vector<TrackedBox> pred;

  void check() const {
    TrackedBoxSet{gt}.check();
    TrackedBoxSet{pred}.check();
  }

  static TrackingLog from_json(const Json& j) {
    TrackingLog log;
    log.gt = TrackedBoxSet::from_json_array(j.at("gt")).entries;
    log.pred = TrackedBoxSet::from_json_array(j.at("pred")).entries;
    return log;
  }
};

struct ClearCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t ids = 0;
};

/// Frame-by-frame greedy matching of predictions with confidence >= min_conf.
/// Pairs of the same class are taken in ascending center distance (ties by
/// gt index, then prediction index) up to the match distance.
inline ClearCounts clear_counts(const TrackingLog& log, double min_conf, double match_distance) {
  std::map<std::size_t, std::vector<const TrackedBox*>> gt_by_frame, pred_by_frame;
  for (const auto& g : log.gt) gt_by_frame[g.frame_index].push_back(&g);
  for (const auto& p : log.pred)
    if (p.confidence >= min_conf) pred_by_frame[p.frame_index].push_back(&p);

  ClearCounts c;
  std::map<std::int64_t, std::int64_t> last_match;  // gt id -> tracker id
  std::set<std::size_t> frames;
  for (const auto& [f, v] : gt_by_frame) frames.insert(f);
  for (const auto& [f, v] : pred_by_frame) frames.insert(f);
  for (auto f : frames) {
    const auto& gs = gt_by_frame[f];
    const auto& ps = pred_by_frame[f];
    struct Candidate {
      double dist;
      std::size_t g, p;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < gs.size(); ++i)
      for (std::size_t k = 0; k < ps.size(); ++k) {
        if (gs[i]->class_id != ps[k]->class_id) continue;
        const double d = std::hypot(gs[i]->center[0] - ps[k]->center[0], gs[i]->center[1] - ps[k]->center[1]);
        if (d <= match_distance) cands.push_back({d, i, k});
      }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      if (a.g != b.g) return a.g < b.g;
      return a.p < b.p;
    });
    std::vector<bool> g_used(gs.size(), false), p_used(ps.size(), false);
    for (const auto& cand : cands) {
      if (g_used[cand.g] || p_used[cand.p]) continue;
      g_used[cand.g] = p_used[cand.p] = true;
      ++c.tp;
      const auto gid = gs[cand.g]->track_id, pid = ps[cand.p]->track_id;
      auto it = last_match.find(gid);
      if (it != last_match.end() && it->second != pid) ++c.ids;
      last_match[gid] = pid;
    }
    c.fn += static_cast<std::size_t>(std::count(g_used.begin(), g_used.end(), false));
    c.fp += static_cast<std::size_t>(std::count(p_used.begin(), p_used.end(), false));
  }
  return c;
}

struct RecallPoint {
  double target = 0.0;     // recall target r
  double threshold = 0.0;  // confidence threshold used
  double recall = 0.0;     // achieved recall at that threshold
  double motar = 0.0;
};

struct TrackingResult {
  double amota = 0.0;
  double mota = 0.0;    // all predictions
  double recall = 0.0;  // all predictions
  std::vector<RecallPoint> points;  // achievable targets only
};

/// Confidence sweep over recall targets k / recall_points. For each target the
/// highest threshold reaching it is used; AMOTA is the mean MOTAR over the
/// achievable targets and 0 when none is achievable.
inline TrackingResult amota(const TrackingLog& log, TrackingConfig cfg = {}) {
  log.check();
  require(!log.gt.empty(), ErrorCode::kNoGroundTruth, "tracking log has no ground truth");
  require(cfg.recall_points >= 1, ErrorCode::kOutOfRange, "recall grid needs at least one point");
  const double p_total = static_cast<double>(log.gt.size());

  std::vector<double> thresholds;
  for (const auto& p : log.pred) thresholds.push_back(p.confidence);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<ClearCounts> counts;
  for (double th : thresholds) counts.push_back(clear_counts(log, th, cfg.match_distance));

  TrackingResult out;
  const auto all = clear_counts(log, 0.0, cfg.match_distance);
  out.recall = static_cast<double>(all.tp) / p_total;
  out.mota = 1.0 - static_cast<double>(all.fn + all.fp + all.ids) / p_total;

  // Recall targets are compared as integer counts to avoid rounding at r = k/R.
  const double denom = static_cast<double>(cfg.recall_points);
  double sum = 0.0;
  for (std::size_t k = 1; k <= cfg.recall_points; ++k) {
    const double r = static_cast<double>(k) / denom;
    std::optional<std::size_t> chosen;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      // tp / P >= k / R  <=>  tp * R >= k * P
      if (static_cast<double>(counts[i].tp) * denom >= static_cast<double>(k) * p_total) {
        chosen = i;
        break;
      }
    }
    if (!chosen) continue;
    const auto& c = counts[*chosen];
    // MOTAR uses the recall reached at the chosen threshold, which keeps it
    // within [0, 1] when that threshold overshoots the target. With that
    // recall FN equals (1 - r) P, so the error term reduces to IDS + FP over TP.
    RecallPoint pt;
    pt.target = r;
    pt.threshold = thresholds[*chosen];
    pt.recall = static_cast<double>(c.tp) / p_total;
    pt.motar = std::clamp(1.0 - static_cast<double>(c.ids + c.fp) / static_cast<double>(c.tp), 0.0, 1.0);
    sum += pt.motar;
    out.points.push_back(pt);
  }
  out.amota = out.points.empty() ? 0.0 : sum / static_cast<double>(out.points.size());
  return out;
}

// ---------------------------------------------------------------------------
// Occupancy RayIoU

struct Ray {
  Vec3 origin{};
  Vec3 direction{1.0, 0.0, 0.0};
  double max_range = 1.0;
};

struct RaySet {
  std::vector<Ray> rays;

  void check() const {
    for (const auto& r : rays) {
      const double n = std::sqrt(r.direction[0] * r.direction[0] + r.direction[1] * r.direction[1] +
                                 r.direction[2] * r.direction[2]);
      require(std::abs(n - 1.0) <= 1e-6, ErrorCode::kInvariantViolation, "ray direction is not unit length");
      require(r.max_range > 0.0, ErrorCode::kInvariantViolation, "ray max_range must be positive");
    }
  }

  /// [{"origin": [x,y,z], "direction": [dx,dy,dz], "max_range": m}, ...]
  static RaySet from_json(const Json& j) {
    require(j.is_array(), ErrorCode::kParseError, "ray set must be a JSON array");
    RaySet s;
    for (const auto& e : j)
      s.rays.push_back({e.at("origin").get<Vec3>(), e.at("direction").get<Vec3>(), e.at("max_range").get<double>()});
    s.check();
    return s;
  }
};

struct RayHit {
  std::uint16_t label = 0;
  double depth = 0.0;
};

/// First non-free voxel along the ray, by voxel traversal. The reported depth
/// is the entry distance into that voxel plus half a voxel. A position on a
/// voxel boundary belongs to the voxel the ray moves into; simultaneous
/// boundary crossings step the lowest axis first.
inline std::optional<RayHit> first_hit(const VoxelGrid& g, const Ray& ray) {
  const double vs = g.voxel_size;
  double t0 = 0.0, t1 = ray.max_range;
  for (int a = 0; a < 3; ++a) {
    const double lo = g.origin[a], hi = g.origin[a] + static_cast<double>(g.dims[a]) * vs;
    const double o = ray.origin[a], d = ray.direction[a];
    if (d == 0.0) {
      if (o < lo || o >= hi) return std::nullopt;
      continue;
    }
    double ta = (lo - o) / d, tb = (hi - o) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 >= t1) return std::nullopt;

  std::array<std::int64_t, 3> cell{};
  std::array<int, 3> step{};
  std::array<double, 3> t_max{}, t_delta{};
  for (int a = 0; a < 3; ++a) {
    const double d = ray.direction[a];
    const double u = (ray.origin[a] + t0 * d - g.origin[a]) / vs;
    auto c = static_cast<std::int64_t>(std::floor(u));
    if (d < 0.0 && u == std::floor(u)) c -= 1;  // on a boundary moving down: enter the lower cell
    c = std::clamp<std::int64_t>(c, 0, static_cast<std::int64_t>(g.dims[a]) - 1);
    cell[a] = c;
    if (d > 0.0) {
      step[a] = 1;
      t_max[a] = (g.origin[a] + static_cast<double>(c + 1) * vs - ray.origin[a]) / d;
      t_delta[a] = vs / d;
    } else if (d < 0.0) {
      step[a] = -1;
      t_max[a] = (g.origin[a] + static_cast<double>(c) * vs - ray.origin[a]) / d;
      t_delta[a] = -vs / d;
    } else {
      step[a] = 0;
      t_max[a] = std::numeric_limits<double>::infinity();
      t_delta[a] = std::numeric_limits<double>::infinity();
    }
  }

  double t_enter = t0;
  while (true) {
    const auto label = g.at(static_cast<std::size_t>(cell[0]), static_cast<std::size_t>(cell[1]),
                            static_cast<std::size_t>(cell[2]));
    if (label != 0) return RayHit{label, t_enter + 0.5 * vs};
    int axis = 0;
    for (int a = 1; a < 3; ++a)
      if (t_max[a] < t_max[axis]) axis = a;
    t_enter = t_max[axis];
    if (t_enter >= t1) return std::nullopt;
    cell[axis] += step[axis];
    if (cell[axis] < 0 || cell[axis] >= static_cast<std::int64_t>(g.dims[axis])) return std::nullopt;
    t_max[axis] += t_delta[axis];
  }
}

inline constexpr std::array<double, 3> kRayDeltas = {1.0, 2.0, 4.0};

struct RayIouResult {
  std::vector<double> deltas;
  std::vector<double> ray_iou;                         // class mean at each delta
  std::vector<std::map<std::uint16_t, double>> per_class;  // at each delta
  double mray_iou = 0.0;                              // mean over deltas
};

/// Ray-level TP/FP/FN per class at each tolerance. Classes 1..C-1 with any
/// ray event enter the class mean; if no class has an event the grids agree
/// on every ray and the score is 1.
inline RayIouResult ray_iou(const VoxelGrid& pred, const VoxelGrid& gt, const RaySet& rays,
                            std::span<const double> deltas = kRayDeltas) {
  require(pred.same_geometry(gt), ErrorCode::kGridMismatch, "occupancy grids differ in geometry");
  const std::uint16_t classes = std::max(pred.class_count, gt.class_count);
  std::vector<std::optional<RayHit>> ph, gh;
  for (const auto& r : rays.rays) {
    ph.push_back(first_hit(pred, r));
    gh.push_back(first_hit(gt, r));
  }
  RayIouResult out;
  for (double delta : deltas) {
    std::vector<double> tp(classes, 0.0), fp(classes, 0.0), fn(classes, 0.0);
    for (std::size_t i = 0; i < ph.size(); ++i) {
      const auto& p = ph[i];
      const auto& g = gh[i];
      if (g && p) {
        if (g->label == p->label && std::abs(p->depth - g->depth) <= delta) {
          tp[g->label] += 1.0;
        } else {
          fn[g->label] += 1.0;
          fp[p->label] += 1.0;
        }
      } else if (g) {
        fn[g->label] += 1.0;
      } else if (p) {
        fp[p->label] += 1.0;
      }
    }
    std::map<std::uint16_t, double> per_class;
    double sum = 0.0;
    for (std::uint16_t c = 1; c < classes; ++c) {
      const double den = tp[c] + fp[c] + fn[c];
      if (den == 0.0) continue;
      per_class[c] = tp[c] / den;
      sum += per_class[c];
    }
    out.deltas.push_back(delta);
    out.ray_iou.push_back(per_class.empty() ? 1.0 : sum / static_cast<double>(per_class.size()));
    out.per_class.push_back(std::move(per_class));
  }
  out.mray_iou = numerics::mean(out.ray_iou);
  return out;
}

}  // namespace wmeval::downstream

#endif  // WMEVAL_DOWNSTREAM_HPP
