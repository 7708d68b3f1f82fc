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

// Generation-quality dimensions. Every scorer works on precomputed
// per-video artifacts; dataset values are means of per-video values in the
// order given by the caller.

#ifndef WMEVAL_GENERATION_HPP
#define WMEVAL_GENERATION_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmeval/error.hpp"
#include "wmeval/interchange/artifacts.hpp"
#include "wmeval/interchange/manifest.hpp"
#include "wmeval/numerics/assignment.hpp"
#include "wmeval/numerics/matrix.hpp"
#include "wmeval/numerics/morphology.hpp"
#include "wmeval/numerics/statistics.hpp"

namespace wmeval::generation {

using numerics::Matrix;

// ---------------------------------------------------------------------------
// Subject fidelity

struct ObjectConfidence {
  std::string video_id;
  std::size_t frame_index = 0;
  std::int64_t track_id = 0;
  std::uint16_t class_id = 0;
  double confidence = 0.0;
};

inline void from_json(const Json& j, ObjectConfidence& r) {
  r.video_id = j.at("video_id").get<std::string>();
  r.frame_index = j.at("frame").get<std::size_t>();
  r.track_id = j.value("track_id", std::int64_t{0});
  r.class_id = j.at("class_id").get<std::uint16_t>();
  r.confidence = j.at("confidence").get<double>();
}

struct SubjectFidelityResult {
  std::map<std::uint16_t, double> per_class;  // mean over videos containing the class
  std::map<std::string, double> per_video;    // mean over classes present in the video
  double total = 0.0;                         // mean of per_video
  double class_mean_total = 0.0;              // mean of per_class
  double instance_weighted_total = 0.0;       // mean over every record
};

/// Nested mean: instances within (video, class, frame), then frames, then the
/// classes present in a video, then videos. Empty cells are skipped.
inline SubjectFidelityResult subject_fidelity(std::span<const ObjectConfidence> records,
                                              std::span<const std::uint16_t> classes) {
  require(!records.empty(), ErrorCode::kEmptyInput, "subject fidelity needs at least one record");
  std::set<std::uint16_t> known(classes.begin(), classes.end());
  // video -> class -> frame -> (sum, count)
  std::map<std::string, std::map<std::uint16_t, std::map<std::size_t, std::pair<double, std::size_t>>>> cells;
  double all_sum = 0.0;
  for (const auto& r : records) {
    require(r.confidence >= 0.0 && r.confidence <= 1.0, ErrorCode::kOutOfRange, "confidence outside [0,1]");
    require(known.count(r.class_id) > 0, ErrorCode::kOutOfRange,
            "class " + std::to_string(r.class_id) + " not in the class table");
    auto& cell = cells[r.video_id][r.class_id][r.frame_index];
    cell.first += r.confidence;
    cell.second += 1;
    all_sum += r.confidence;
  }

  SubjectFidelityResult out;
  std::map<std::uint16_t, std::vector<double>> class_values;
  for (const auto& [video, by_class] : cells) {
    double video_sum = 0.0;
    for (const auto& [cls, by_frame] : by_class) {
      double frame_sum = 0.0;
      for (const auto& [frame, cell] : by_frame) frame_sum += cell.first / static_cast<double>(cell.second);
      double class_value = frame_sum / static_cast<double>(by_frame.size());
      class_values[cls].push_back(class_value);
      video_sum += class_value;
    }
    out.per_video[video] = video_sum / static_cast<double>(by_class.size());
  }
  double total = 0.0;
  for (const auto& [v, s] : out.per_video) total += s;
  out.total = total / static_cast<double>(out.per_video.size());
  double class_total = 0.0;
  for (const auto& [cls, values] : class_values) {
    out.per_class[cls] = numerics::mean(values);
    class_total += out.per_class[cls];
  }
  out.class_mean_total = class_total / static_cast<double>(out.per_class.size());
  out.instance_weighted_total = all_sum / static_cast<double>(records.size());
  return out;
}

// ---------------------------------------------------------------------------
// Subject coherence

/// Mean cosine similarity between consecutive rows. Requires >= 2 rows.
inline double track_coherence(const Matrix& track) {
  require(track.rows() >= 2, ErrorCode::kTooShort, "track needs at least two frames");
  double s = 0.0;
  for (std::size_t t = 0; t + 1 < track.rows(); ++t) s += numerics::cosine_similarity(track.row(t), track.row(t + 1));
  return s / static_cast<double>(track.rows() - 1);
}

/// Mean over usable tracks (>= 2 frames); nullopt when the video has none.
inline std::optional<double> video_subject_coherence(std::span<const Matrix> tracks) {
  double s = 0.0;
  std::size_t used = 0;
  for (const auto& t : tracks) {
    if (t.rows() < 2) continue;
    s += track_coherence(t);
    ++used;
  }
  if (used == 0) return std::nullopt;
  return s / static_cast<double>(used);
}

/// Mean over videos that have at least one usable track.
inline double subject_coherence(std::span<const std::vector<Matrix>> videos) {
  double s = 0.0;
  std::size_t used = 0;
  for (const auto& v : videos) {
    if (auto score = video_subject_coherence(v)) {
      s += *score;
      ++used;
    }
  }
  require(used > 0, ErrorCode::kNoUsableTracks, "no track spans two or more frames");
  return s / static_cast<double>(used);
}

/// Splits row-aligned embeddings into per-track sequences ordered by frame.
/// Rows whose detection confidence is below the class threshold are dropped.
inline std::vector<Matrix> group_tracks(const EmbeddingSequence& rows, const TrackedBoxSet& boxes,
                                        const ClassTables& classes) {
  require(rows.frames() == boxes.entries.size(), ErrorCode::kLengthMismatch,
          "track embeddings and box records differ in count");
  std::map<std::int64_t, std::vector<std::pair<std::size_t, std::size_t>>> by_track;  // frame, row
  for (std::size_t i = 0; i < boxes.entries.size(); ++i) {
    const auto& b = boxes.entries[i];
    const auto* cls = classes.object(b.class_id);
    double threshold = cls ? cls->threshold : 0.0;
    if (b.confidence < threshold) continue;
    by_track[b.track_id].emplace_back(b.frame_index, i);
  }
  std::vector<Matrix> tracks;
  for (auto& [id, rows_of_track] : by_track) {
    std::sort(rows_of_track.begin(), rows_of_track.end());
    Matrix m(rows_of_track.size(), rows.dim());
    for (std::size_t k = 0; k < rows_of_track.size(); ++k) {
      auto src = rows.values.row(rows_of_track[k].second);
      std::copy(src.begin(), src.end(), m.row(k).begin());
    }
    tracks.push_back(std::move(m));
  }
  return tracks;
}

// ---------------------------------------------------------------------------
// Subject and temporal consistency share one functional form.

struct ConsistencyResult {
  double score = 0.0;  // mean over videos of ACM / (1 + TJI) * sqrt(MRS)
  double acm = 0.0;    // component means, for reporting
  double tji = 0.0;
  double mrs = 0.0;
  std::vector<double> per_video;
};

inline double video_consistency(const Matrix& gen, const Matrix& ref) {
  return numerics::temporal_profile(gen, ref).score();
}

inline ConsistencyResult temporal_consistency(std::span<const std::pair<Matrix, Matrix>> videos) {
  require(!videos.empty(), ErrorCode::kEmptyInput, "no videos");
  ConsistencyResult out;
  for (const auto& [gen, ref] : videos) {
    auto p = numerics::temporal_profile(gen, ref);
    out.per_video.push_back(p.score());
    out.acm += p.acm;
    out.tji += p.tji;
    out.mrs += p.mrs;
  }
  const auto n = static_cast<double>(videos.size());
  out.score = numerics::mean(out.per_video);
  out.acm /= n;
  out.tji /= n;
  out.mrs /= n;
  return out;
}

inline ConsistencyResult subject_consistency(std::span<const std::pair<Matrix, Matrix>> videos) {
  return temporal_consistency(videos);
}

// ---------------------------------------------------------------------------
// Depth discrepancy

/// Mean L2 distance between consecutive rows; lower is smoother.
inline double video_depth_discrepancy(const Matrix& features) {
  require(features.rows() >= 2, ErrorCode::kTooShort, "depth discrepancy needs at least two frames");
  double s = 0.0;
  for (std::size_t t = 0; t + 1 < features.rows(); ++t)
    s += numerics::l2_distance(features.row(t), features.row(t + 1));
  return s / static_cast<double>(features.rows() - 1);
}

inline double depth_discrepancy(std::span<const Matrix> videos) {
  require(!videos.empty(), ErrorCode::kEmptyInput, "no videos");
  std::vector<double> per_video;
  for (const auto& v : videos) per_video.push_back(video_depth_discrepancy(v));
  return numerics::mean(per_video);
}

// ---------------------------------------------------------------------------
// Semantic consistency

struct SemanticWeights {
  double lfr = 0.5;
  double sac = 0.4;
  double cds = 0.1;
};

struct SemanticScores {
  double lfr = 0.0;
  double sac = 0.0;
  double cds = 0.0;
  double score = 0.0;
};

inline constexpr int kDefaultErosionRadius = 1;

/// Fraction of eroded-interior pixels of frame t whose label changes in
/// frame t+1. Transitions with no interior pixels count as zero flips.
inline double label_flip_ratio(const LabelMaskSequence& m, std::size_t t, int erosion_radius) {
  auto cur = m.frame(t), next = m.frame(t + 1);
  std::size_t flips = 0, interior = 0;
  for (std::uint16_t c = 0; c < m.class_count; ++c) {
    numerics::BinaryMask mask(m.height, m.width);
    bool any = false;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      mask.bits[i] = cur[i] == c;
      any = any || mask.bits[i];
    }
    if (!any) continue;
    auto eroded = numerics::binary_erode(mask, erosion_radius);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (!eroded.bits[i]) continue;
      ++interior;
      flips += next[i] != c;
    }
  }
  return interior == 0 ? 0.0 : static_cast<double>(flips) / static_cast<double>(interior);
}

/// Pixel-weighted IoU of Hungarian-matched same-class regions between frames
/// t and t+1, normalized by the total region area of frame t.
inline double segment_association(const LabelMaskSequence& m, std::size_t t) {
  auto cur = m.frame(t), next = m.frame(t + 1);
  double numerator = 0.0, denominator = 0.0;
  for (std::uint16_t c = 0; c < m.class_count; ++c) {
    auto a = numerics::connected_components(cur, m.height, m.width, c);
    if (a.empty()) continue;
    for (const auto& r : a) denominator += static_cast<double>(r.size());
    auto b = numerics::connected_components(next, m.height, m.width, c);
    if (b.empty()) continue;
    Matrix iou(a.size(), b.size());
    Matrix cost(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        iou(i, j) = numerics::region_iou(a[i], b[j]);
        cost(i, j) = 1.0 - iou(i, j);
      }
    for (const auto& [i, j] : numerics::hungarian_assign(cost).pairs)
      numerator += static_cast<double>(a[i].size()) * iou(i, j);
  }
  require(denominator > 0.0, ErrorCode::kEmptyMasks, "frame has no labelled pixels");
  return numerator / denominator;
}

inline std::vector<double> class_histogram(const LabelMaskSequence& m, std::size_t t) {
  std::vector<double> h(m.class_count, 0.0);
  for (auto l : m.frame(t)) h[l] += 1.0;
  return h;
}

inline SemanticScores video_semantic_consistency(const LabelMaskSequence& m,
                                                 int erosion_radius = kDefaultErosionRadius,
                                                 SemanticWeights w = {}) {
  require(m.frames >= 2, ErrorCode::kSingleFrame, "semantic consistency needs at least two frames");
  require(m.class_count >= 1, ErrorCode::kEmptyMasks, "class table is empty");
  require(m.frame_size() > 0, ErrorCode::kEmptyMasks, "masks have no pixels");
  m.check();
  double flip = 0.0, sac = 0.0, div = 0.0;
  for (std::size_t t = 0; t + 1 < m.frames; ++t) {
    flip += label_flip_ratio(m, t, erosion_radius);
    sac += segment_association(m, t);
    div += numerics::jsd(class_histogram(m, t), class_histogram(m, t + 1));
  }
  const auto transitions = static_cast<double>(m.frames - 1);
  SemanticScores s;
  s.lfr = 1.0 - flip / transitions;
  s.sac = sac / transitions;
  s.cds = 1.0 - div / transitions;
  s.score = w.lfr * s.lfr + w.sac * s.sac + w.cds * s.cds;
  return s;
}

struct SemanticConsistencyResult {
  SemanticScores mean;  // per-video means of each quantity
  std::vector<SemanticScores> per_video;
};

inline SemanticConsistencyResult semantic_consistency(std::span<const LabelMaskSequence> videos,
                                                      int erosion_radius = kDefaultErosionRadius) {
  require(!videos.empty(), ErrorCode::kEmptyInput, "no videos");
  SemanticConsistencyResult out;
  for (const auto& v : videos) {
    out.per_video.push_back(video_semantic_consistency(v, erosion_radius));
    out.mean.lfr += out.per_video.back().lfr;
    out.mean.sac += out.per_video.back().sac;
    out.mean.cds += out.per_video.back().cds;
    out.mean.score += out.per_video.back().score;
  }
  const auto n = static_cast<double>(videos.size());
  out.mean.lfr /= n;
  out.mean.sac /= n;
  out.mean.cds /= n;
  out.mean.score /= n;
  return out;
}

// ---------------------------------------------------------------------------
// Perceptual discrepancy (Frechet distance of video-level features)

struct FrechetResult {
  double value = 0.0;
  bool singular_covariance = false;  // fewer than D + 1 samples on a side
};

inline FrechetResult perceptual_discrepancy(const Matrix& real_feats, const Matrix& gen_feats) {
  require(real_feats.cols() == gen_feats.cols(), ErrorCode::kDimMismatch, "feature dimensions differ");
  FrechetResult r;
  r.value = numerics::frechet_distance(numerics::summarize_gaussian(real_feats),
                                       numerics::summarize_gaussian(gen_feats));
  const std::size_t d = real_feats.cols();
  r.singular_covariance = real_feats.rows() < d + 1 || gen_feats.rows() < d + 1;
  return r;
}

// ---------------------------------------------------------------------------
// Cross-view consistency

struct CrossViewResult {
  double total = 0.0;
  std::map<std::string, double> per_video;
};

/// Per video: sum of match confidences / (|pairs| * frames); total is the mean
/// over videos. `frames_per_video` lists every evaluated video; records for
/// unlisted videos, undeclared pairs, or out-of-range frames are rejected.
inline CrossViewResult cross_view_consistency(const MatchRecordSet& matches, std::span<const CameraPair> pairs,
                                              const std::map<std::string, std::size_t>& frames_per_video) {
  require(!pairs.empty(), ErrorCode::kUnknownPair, "camera pair set is empty");
  require(!frames_per_video.empty(), ErrorCode::kEmptyInput, "no videos");
  std::map<std::string, double> sums;
  for (const auto& [video, frames] : frames_per_video) {
    require(frames > 0, ErrorCode::kInvariantViolation, "video " + video + " has zero frames");
    sums[video] = 0.0;
  }
  for (const auto& r : matches.records) {
    require(std::find(pairs.begin(), pairs.end(), r.camera_pair) != pairs.end(), ErrorCode::kUnknownPair,
            "camera pair (" + std::to_string(r.camera_pair.first) + "," + std::to_string(r.camera_pair.second) +
                ") is not declared");
    auto it = frames_per_video.find(r.video_id);
    require(it != frames_per_video.end(), ErrorCode::kDanglingReference, "unknown video '" + r.video_id + "'");
    require(r.frame_index < it->second, ErrorCode::kOutOfRange, "frame index beyond video length");
    for (double c : r.confidences) {
      require(c >= 0.0 && c <= 1.0, ErrorCode::kOutOfRange, "match confidence outside [0,1]");
      sums[r.video_id] += c;
    }
  }
  CrossViewResult out;
  double total = 0.0;
  for (const auto& [video, frames] : frames_per_video) {
    double v = sums[video] / (static_cast<double>(pairs.size()) * static_cast<double>(frames));
    out.per_video[video] = v;
    total += v;
  }
  out.total = total / static_cast<double>(frames_per_video.size());
  return out;
}

}  // namespace wmeval::generation

#endif  // WMEVAL_GENERATION_HPP
