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

// Planning-level scores. Sub-scores come from an external driving harness;
// nothing here simulates.

#ifndef WMEVAL_ACTION_HPP
#define WMEVAL_ACTION_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "wmeval/error.hpp"
#include "wmeval/interchange/artifacts.hpp"
#include "wmeval/numerics/statistics.hpp"

namespace wmeval::action {

inline constexpr double kWeightEp = 5.0;
inline constexpr double kWeightTtc = 5.0;
inline constexpr double kWeightComfort = 2.0;

/// Mean waypoint L2 distance for one video.
inline double video_displacement_error(const Trajectory& gen, const Trajectory& gt) {
  gen.check();
  gt.check();
  require(gen.waypoints.size() == gt.waypoints.size(), ErrorCode::kLengthMismatch, "waypoint counts differ");
  double s = 0.0;
  for (std::size_t t = 0; t < gen.waypoints.size(); ++t)
    s += std::hypot(gen.waypoints[t][0] - gt.waypoints[t][0], gen.waypoints[t][1] - gt.waypoints[t][1]);
  return s / static_cast<double>(gen.waypoints.size());
}

/// Mean over videos of per-video means; with equal T_p this is the flat mean
/// over all waypoints.
inline double displacement_error(std::span<const TrajectoryPair> videos) {
  require(!videos.empty(), ErrorCode::kLengthMismatch, "no trajectories");
  double s = 0.0;
  for (const auto& v : videos) s += video_displacement_error(v.gen, v.gt);
  return s / static_cast<double>(videos.size());
}

struct EpisodeSubScores {
  std::string episode_id;
  double nc = 1.0;
  double dac = 1.0;
  double ep = 1.0;
  double ttc = 1.0;
  double comfort = 1.0;
  double d_completed = 0.0;
  double d_total = 1.0;

  void check_scores() const {
    for (double v : {nc, dac, ep, ttc, comfort})
      require(v >= 0.0 && v <= 1.0, ErrorCode::kOutOfRange,
              "sub-score outside [0,1] in episode '" + episode_id + "'");
  }
};

inline void from_json(const Json& j, EpisodeSubScores& s) {
  s.episode_id = j.value("episode_id", std::string());
  s.nc = j.at("nc").get<double>();
  s.dac = j.at("dac").get<double>();
  s.ep = j.at("ep").get<double>();
  s.ttc = j.at("ttc").get<double>();
  s.comfort = j.at("comfort").get<double>();
  s.d_completed = j.value("d_completed", 0.0);
  s.d_total = j.value("d_total", 1.0);
}

inline double pdms(const EpisodeSubScores& s) {
  s.check_scores();
  return s.nc * s.dac * (kWeightEp * s.ep + kWeightTtc * s.ttc + kWeightComfort * s.comfort) /
         (kWeightEp + kWeightTtc + kWeightComfort);
}

struct RouteCompletion {
  double value = 0.0;
  bool clamped = false;  // d_completed exceeded d_total
};

inline RouteCompletion route_completion(const EpisodeSubScores& s) {
  require(s.d_total > 0.0, ErrorCode::kZeroRoute, "route length must be positive in episode '" + s.episode_id + "'");
  require(s.d_completed >= 0.0, ErrorCode::kOutOfRange, "negative completed distance");
  RouteCompletion rc;
  rc.clamped = s.d_completed > s.d_total;
  rc.value = std::min(s.d_completed, s.d_total) / s.d_total;
  return rc;
}

inline double ads(const EpisodeSubScores& s) { return route_completion(s).value * pdms(s); }

struct EpisodeSummary {
  double pdms = 0.0;
  double route_completion = 0.0;
  double ads = 0.0;
  std::vector<std::string> clamped_episodes;
  std::vector<double> per_episode_pdms;
  std::vector<double> per_episode_rc;
  std::vector<double> per_episode_ads;
};

/// Per-episode composition, then plain means.
inline EpisodeSummary summarize_episodes(std::span<const EpisodeSubScores> episodes) {
  require(!episodes.empty(), ErrorCode::kEmptyInput, "no episodes");
  EpisodeSummary out;
  for (const auto& e : episodes) {
    const double p = pdms(e);
    const auto rc = route_completion(e);
    if (rc.clamped) out.clamped_episodes.push_back(e.episode_id);
    out.per_episode_pdms.push_back(p);
    out.per_episode_rc.push_back(rc.value);
    out.per_episode_ads.push_back(rc.value * p);
  }
  out.pdms = numerics::mean(out.per_episode_pdms);
  out.route_completion = numerics::mean(out.per_episode_rc);
  out.ads = numerics::mean(out.per_episode_ads);
  return out;
}

}  // namespace wmeval::action

#endif  // WMEVAL_ACTION_HPP
