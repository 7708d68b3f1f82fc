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

// Reconstruction dimensions: re-rendered frames against the recorded ones,
// rendered depth against reference depth, and novel-view summaries.

#ifndef WMEVAL_RECONSTRUCTION_HPP
#define WMEVAL_RECONSTRUCTION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmeval/error.hpp"
#include "wmeval/interchange/artifacts.hpp"
#include "wmeval/numerics/image_quality.hpp"
#include "wmeval/numerics/matrix.hpp"
#include "wmeval/numerics/statistics.hpp"

namespace wmeval::reconstruction {

using numerics::Image;

struct RenderPairSet {
  std::vector<Image> rendered;
  std::vector<Image> reference;
  std::optional<std::vector<double>> lpips;  // one scalar per frame, adapter-supplied

  void check() const {
    require(!rendered.empty(), ErrorCode::kEmptyInput, "render pair set is empty");
    require(rendered.size() == reference.size(), ErrorCode::kShapeMismatch, "rendered/reference frame counts differ");
    for (std::size_t i = 0; i < rendered.size(); ++i)
      require(rendered[i].same_shape(reference[i]), ErrorCode::kShapeMismatch,
              "frame " + std::to_string(i) + " differs in shape");
    if (lpips) {
      require(lpips->size() == rendered.size(), ErrorCode::kLengthMismatch, "one LPIPS value per frame expected");
      for (double v : *lpips)
        require(v >= 0.0 && v <= 2.0, ErrorCode::kOutOfRange, "LPIPS value outside [0,2]");
    }
  }
};

struct PhotometricReport {
  double psnr = 0.0;
  double ssim = 0.0;
  std::optional<double> lpips;
};

inline PhotometricReport video_photometric_report(const RenderPairSet& pairs) {
  pairs.check();
  PhotometricReport r;
  for (std::size_t i = 0; i < pairs.rendered.size(); ++i) {
    r.psnr += numerics::psnr(pairs.rendered[i], pairs.reference[i]);
    r.ssim += numerics::ssim_multichannel(pairs.rendered[i], pairs.reference[i]);
  }
  const auto n = static_cast<double>(pairs.rendered.size());
  r.psnr /= n;
  r.ssim /= n;
  if (pairs.lpips) r.lpips = numerics::mean(*pairs.lpips);
  return r;
}

/// Frame means per video, then the mean over videos. LPIPS is reported only
/// when every video supplies it.
inline PhotometricReport photometric_report(std::span<const RenderPairSet> videos) {
  require(!videos.empty(), ErrorCode::kEmptyInput, "no videos");
  PhotometricReport out;
  double lp = 0.0;
  bool all_lpips = true;
  for (const auto& v : videos) {
    auto r = video_photometric_report(v);
    out.psnr += r.psnr;
    out.ssim += r.ssim;
    if (r.lpips)
      lp += *r.lpips;
    else
      all_lpips = false;
  }
  const auto n = static_cast<double>(videos.size());
  out.psnr /= n;
  out.ssim /= n;
  if (all_lpips) out.lpips = lp / n;
  return out;
}

struct DepthErrorReport {
  double abs_rel = 0.0;
  double rmse = 0.0;
  std::array<double, 3> delta{};  // fraction within 1.25, 1.25^2, 1.25^3
};

/// Masked depth errors: per-frame values averaged over frames. Every frame
/// must select at least one pixel, and the reference must be positive there.
inline DepthErrorReport video_geometric_report(const DepthFrameSet& pred, const DepthFrameSet& gt,
                                               std::span<const std::uint8_t> mask) {
  require(pred.frames == gt.frames && pred.height == gt.height && pred.width == gt.width, ErrorCode::kShapeMismatch,
          "depth shapes differ");
  require(mask.size() == gt.depth.size(), ErrorCode::kShapeMismatch, "mask shape differs from depth");
  require(gt.frames >= 1, ErrorCode::kEmptyInput, "depth set has no frames");
  DepthErrorReport out;
  const std::size_t fs = gt.frame_size();
  for (std::size_t t = 0; t < gt.frames; ++t) {
    double abs_rel = 0.0, sq = 0.0;
    std::array<double, 3> within{};
    std::size_t n = 0;
    for (std::size_t i = t * fs; i < (t + 1) * fs; ++i) {
      if (!mask[i]) continue;
      const double d = pred.depth[i], g = gt.depth[i];
      require(g > 0.0, ErrorCode::kNonPositiveGtDepth, "reference depth must be positive under the mask");
      abs_rel += std::abs(d - g) / g;
      sq += (d - g) * (d - g);
      const double ratio = d > 0.0 ? std::max(d / g, g / d) : INFINITY;
      double bound = 1.25;
      for (auto& w : within) {
        if (ratio < bound) w += 1.0;
        bound *= 1.25;
      }
      ++n;
    }
    require(n > 0, ErrorCode::kEmptyMask, "frame " + std::to_string(t) + " has an empty mask");
    const auto nd = static_cast<double>(n);
    out.abs_rel += abs_rel / nd;
    out.rmse += std::sqrt(sq / nd);
    for (std::size_t k = 0; k < 3; ++k) out.delta[k] += within[k] / nd;
  }
  const auto frames = static_cast<double>(gt.frames);
  out.abs_rel /= frames;
  out.rmse /= frames;
  for (auto& d : out.delta) d /= frames;
  return out;
}

/// Uses the reference set's valid mask; without one every pixel is evaluated.
inline DepthErrorReport video_geometric_report(const DepthFrameSet& pred, const DepthFrameSet& gt) {
  std::vector<std::uint8_t> mask = gt.valid_mask.value_or(std::vector<std::uint8_t>(gt.depth.size(), 1));
  return video_geometric_report(pred, gt, mask);
}

inline DepthErrorReport mean_reports(std::span<const DepthErrorReport> per_video) {
  require(!per_video.empty(), ErrorCode::kEmptyInput, "no videos");
  DepthErrorReport out;
  for (const auto& r : per_video) {
    out.abs_rel += r.abs_rel;
    out.rmse += r.rmse;
    for (std::size_t k = 0; k < 3; ++k) out.delta[k] += r.delta[k];
  }
  const auto n = static_cast<double>(per_video.size());
  out.abs_rel /= n;
  out.rmse /= n;
  for (auto& d : out.delta) d /= n;
  return out;
}

// ---------------------------------------------------------------------------
// Novel views

inline constexpr std::array<std::string_view, 4> kTrajectoryConditions = {
    "front_center_interp", "s_curve", "lateral_offset_left", "lateral_offset_right"};

inline bool is_trajectory_condition(std::string_view name) {
  return std::find(kTrajectoryConditions.begin(), kTrajectoryConditions.end(), name) != kTrajectoryConditions.end();
}

struct ConditionSummary {
  std::map<std::string, double> per_condition;
  double average = 0.0;  // equal weight per condition present
};

/// Equal-weight average of per-condition values.
inline ConditionSummary average_conditions(const std::map<std::string, double>& per_condition) {
  require(!per_condition.empty(), ErrorCode::kEmptyCondition, "no trajectory conditions");
  ConditionSummary s;
  for (const auto& [name, v] : per_condition) {
    require(is_trajectory_condition(name), ErrorCode::kUnknownTrajectoryName, "unknown trajectory '" + name + "'");
    s.per_condition[name] = v;
    s.average += v;
  }
  s.average /= static_cast<double>(per_condition.size());
  return s;
}

/// Per-condition frame means of quality scores in [0, 100], then their average.
inline ConditionSummary novel_view_quality(const std::map<std::string, std::vector<double>>& scores) {
  std::map<std::string, double> means;
  for (const auto& [name, values] : scores) {
    require(is_trajectory_condition(name), ErrorCode::kUnknownTrajectoryName, "unknown trajectory '" + name + "'");
    require(!values.empty(), ErrorCode::kEmptyCondition, "trajectory '" + name + "' has no scores");
    for (double v : values) require(v >= 0.0 && v <= 100.0, ErrorCode::kOutOfRange, "quality score outside [0,100]");
    means[name] = numerics::mean(values);
  }
  return average_conditions(means);
}

struct FeaturePair {
  numerics::Matrix real;
  numerics::Matrix gen;
};

/// Frechet distance per condition, then the equal-weight average.
inline ConditionSummary novel_view_discrepancy(const std::map<std::string, FeaturePair>& features) {
  std::map<std::string, double> values;
  for (const auto& [name, fp] : features) {
    require(is_trajectory_condition(name), ErrorCode::kUnknownTrajectoryName, "unknown trajectory '" + name + "'");
    require(fp.real.cols() == fp.gen.cols(), ErrorCode::kDimMismatch, "feature dimensions differ");
    values[name] = numerics::frechet_distance(numerics::summarize_gaussian(fp.real),
                                              numerics::summarize_gaussian(fp.gen));
  }
  return average_conditions(values);
}

}  // namespace wmeval::reconstruction

#endif  // WMEVAL_RECONSTRUCTION_HPP
