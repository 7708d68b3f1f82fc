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

// Run orchestration: manifest in, MetricReport out. Per-video work fans out
// to a small thread pool; every reduction happens afterwards on one thread in
// sorted video order, so reports do not depend on the worker count.

#ifndef WMEVAL_ENGINE_HPP
#define WMEVAL_ENGINE_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wmeval/action.hpp"
#include "wmeval/downstream.hpp"
#include "wmeval/error.hpp"
#include "wmeval/generation.hpp"
#include "wmeval/interchange/artifacts.hpp"
#include "wmeval/interchange/manifest.hpp"
#include "wmeval/interchange/tensor.hpp"
#include "wmeval/metrics.hpp"
#include "wmeval/preference.hpp"
#include "wmeval/reconstruction.hpp"
#include "wmeval/report.hpp"

namespace wmeval {

struct RunConfig {
  std::filesystem::path manifest;
  std::vector<std::string> metrics;  // empty selects the manifest's declared list
  int workers = 1;
  std::filesystem::path out_dir;     // not part of the config hash
};

/// FNV-1a over the manifest bytes and the sorted metric selection.
inline std::string config_hash(const std::string& manifest_bytes, const std::vector<std::string>& metrics) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (unsigned char c : manifest_bytes) mix(c);
  mix('\n');
  for (const auto& m : metrics) {
    for (unsigned char c : m) mix(c);
    mix(',');
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace engine_detail {

template <class T>
struct Slot {
  std::optional<T> value;
  std::string error;
};

inline std::string describe_exception(std::exception_ptr p) {
  try {
    std::rethrow_exception(p);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown failure";
  }
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads; slot i holds the
/// result or the failure message of item i.
template <class T, class Fn>
std::vector<Slot<T>> parallel_map(std::size_t n, int workers, Fn fn) {
  std::vector<Slot<T>> slots(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].value.emplace(fn(i));
      } catch (...) {
        slots[i].error = describe_exception(std::current_exception());
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
  if (threads <= 1) {
    work();
    return slots;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return slots;
}

}  // namespace engine_detail

// ---------------------------------------------------------------------------
// Artifact loaders shared by evaluation and validation.

namespace load {

inline std::filesystem::path path_of(const Json& entry, const char* key) {
  require(entry.is_object() && entry.contains(key) && entry.at(key).is_string(), ErrorCode::kMissingArtifact,
          std::string("artifact key '") + key + "' missing");
  return entry.at(key).get<std::string>();
}

inline std::filesystem::path path_of(const Json& entry) {
  require(entry.is_string(), ErrorCode::kMissingArtifact, "artifact path missing");
  return entry.get<std::string>();
}

inline numerics::Matrix features(const std::filesystem::path& p) {
  auto t = read_tensor(p);
  require(t.shape.size() == 2, ErrorCode::kShapeMismatch, p.string() + ": feature tensor must be N x D");
  require(t.dtype == DType::kF32, ErrorCode::kInvariantViolation, p.string() + ": feature tensor must be f32");
  return numerics::Matrix(t.shape[0], t.shape[1], t.as_doubles());
}

inline EmbeddingSequence embeddings(const std::filesystem::path& p, bool normalized) {
  try {
    return EmbeddingSequence::from_tensor(read_tensor(p), normalized);
  } catch (const Error& e) {
    fail(e.code(), p.string() + ": " + e.what());
  }
}

inline LabelMaskSequence masks(const std::filesystem::path& p, std::uint16_t class_count) {
  require(class_count > 0, ErrorCode::kManifestError, "class table for masks is empty");
  try {
    return LabelMaskSequence::from_tensor(read_tensor(p), class_count);
  } catch (const Error& e) {
    fail(e.code(), p.string() + ": " + e.what());
  }
}

template <class T>
T json_as(const std::filesystem::path& p) {
  auto doc = read_json_file(p);
  try {
    return doc.get<T>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, p.string() + ": " + e.what());
  }
}

struct TrackEmbeddings {
  EmbeddingSequence rows;
  TrackedBoxSet boxes;
};

inline TrackEmbeddings g2(const Json& entry) {
  TrackEmbeddings out{embeddings(path_of(entry, "embeddings"), entry.value("normalized", true)), {}};
  out.boxes = TrackedBoxSet::from_json_array(read_json_file(path_of(entry, "boxes")));
  return out;
}

inline std::pair<numerics::Matrix, numerics::Matrix> paired_embeddings(const Json& entry) {
  const bool normalized = entry.value("normalized", false);
  auto gen = embeddings(path_of(entry, "gen"), normalized);
  auto ref = embeddings(path_of(entry, "ref"), normalized);
  return {std::move(gen.values), std::move(ref.values)};
}

inline reconstruction::RenderPairSet r1(const Json& entry) {
  reconstruction::RenderPairSet s;
  s.rendered = images_from_tensor(read_tensor(path_of(entry, "rendered")));
  s.reference = images_from_tensor(read_tensor(path_of(entry, "reference")));
  if (entry.contains("lpips")) s.lpips = json_as<std::vector<double>>(path_of(entry, "lpips"));
  s.check();
  return s;
}

inline std::pair<DepthFrameSet, DepthFrameSet> r2(const Json& entry) {
  std::optional<TensorFile> mask;
  if (entry.contains("mask")) mask = read_tensor(path_of(entry, "mask"));
  auto pred = DepthFrameSet::from_tensors(read_tensor(path_of(entry, "pred")), std::nullopt);
  auto gt = DepthFrameSet::from_tensors(read_tensor(path_of(entry, "gt")), mask);
  return {std::move(pred), std::move(gt)};
}

struct Occupancy {
  VoxelGrid pred;
  VoxelGrid gt;
  downstream::RaySet rays;
};

inline Occupancy d4(const Json& entry) {
  auto geometry = read_json_file(path_of(entry, "geometry"));
  try {
    Occupancy o{VoxelGrid::from_tensor(read_tensor(path_of(entry, "pred")), geometry),
                VoxelGrid::from_tensor(read_tensor(path_of(entry, "gt")), geometry),
                downstream::RaySet::from_json(read_json_file(path_of(entry, "rays")))};
    return o;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, std::string("occupancy geometry: ") + e.what());
  }
}

inline std::vector<preference::ScoreRecord> score_records(const std::filesystem::path& p) {
  return preference::parse_records(read_jsonl_file(p));
}

/// Loads and checks one artifact entry without scoring it.
inline void check_artifact(const std::string& metric, const Json& entry, const EvaluationManifest& m) {
  try {
    if (metric == "G1") {
      json_as<std::vector<generation::ObjectConfidence>>(path_of(entry));
    } else if (metric == "G2") {
      auto t = g2(entry);
      require(t.rows.frames() == t.boxes.entries.size(), ErrorCode::kLengthMismatch,
              "track embeddings and box records differ in count");
    } else if (metric == "G3" || metric == "G5") {
      paired_embeddings(entry);
    } else if (metric == "G4") {
      embeddings(path_of(entry), false);
    } else if (metric == "G6") {
      masks(path_of(entry), m.classes.semantic_count);
    } else if (metric == "G7") {
      features(path_of(entry, "real"));
      features(path_of(entry, "gen"));
    } else if (metric == "G8") {
      MatchRecordSet::from_json_array(read_json_file(path_of(entry)));
    } else if (metric == "R1") {
      r1(entry);
    } else if (metric == "R2") {
      r2(entry);
    } else if (metric == "R3") {
      json_as<std::map<std::string, std::vector<double>>>(path_of(entry));
    } else if (metric == "R4") {
      for (const auto& [cond, sides] : entry.items()) {
        features(path_of(sides, "real"));
        features(path_of(sides, "gen"));
      }
    } else if (metric == "A1") {
      TrajectoryPair::from_json(read_json_file(path_of(entry)));
    } else if (metric == "A2" || metric == "A3" || metric == "A4") {
      for (const auto& e : json_as<std::vector<action::EpisodeSubScores>>(path_of(entry))) e.check_scores();
    } else if (metric == "D1") {
      masks(path_of(entry, "pred"), m.classes.bev_count);
      masks(path_of(entry, "gt"), m.classes.bev_count);
    } else if (metric == "D2") {
      json_as<downstream::DetectionSummary>(path_of(entry)).check();
    } else if (metric == "D3") {
      downstream::TrackingLog::from_json(read_json_file(path_of(entry)));
    } else if (metric == "D4") {
      d4(entry);
    } else if (metric == "H") {
      score_records(path_of(entry));
    } else {
      fail(ErrorCode::kManifestError, "unknown metric id '" + metric + "'");
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, e.what());
  }
}

}  // namespace load

// ---------------------------------------------------------------------------
// Validation

struct Diagnostic {
  std::string metric;
  std::string video;  // empty for dataset-level artifacts
  std::string code;
  std::string message;
};

/// Checks every declared artifact; an empty result means all passed.
inline std::vector<Diagnostic> validate_artifacts(const EvaluationManifest& m) {
  std::vector<Diagnostic> out;
  for (const auto& issue : m.issues)
    out.push_back({issue.metric, issue.video, std::string(to_string(ErrorCode::kMissingArtifact)), issue.message});
  auto check = [&](const std::string& metric, const std::string& video, const Json& entry) {
    try {
      load::check_artifact(metric, entry, m);
    } catch (const Error& e) {
      out.push_back({metric, video, std::string(to_string(e.code())), e.what()});
    } catch (const std::exception& e) {
      out.push_back({metric, video, "Failure", e.what()});
    }
  };
  for (const auto& v : m.videos)
    for (const auto& [metric, entry] : v.artifacts.items()) check(metric, v.id, entry);
  for (const auto& [metric, entry] : m.dataset.items()) check(metric, "", entry);
  return out;
}

inline std::vector<Diagnostic> validate_artifacts(const std::filesystem::path& manifest_path) {
  return validate_artifacts(load_manifest(manifest_path, /*strict=*/false));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace engine_detail {

struct Context {
  const EvaluationManifest& manifest;
  int workers;
  std::vector<std::string>& warnings;

  void warn(const std::string& w) { warnings.push_back(w); }

  const Json& dataset_entry(const std::string& metric) const {
    require(manifest.dataset.contains(metric), ErrorCode::kMissingArtifact, "no dataset artifact for " + metric);
    return manifest.dataset.at(metric);
  }

  /// Scores every video carrying an artifact for `metric`; failures become
  /// warnings and drop that video only.
  template <class T, class Fn>
  std::vector<std::pair<std::string, T>> per_video(const std::string& metric, Fn fn) {
    std::vector<const VideoEntry*> todo;
    for (const auto& v : manifest.videos)
      if (v.artifacts.contains(metric)) todo.push_back(&v);
    auto slots = parallel_map<T>(todo.size(), workers,
                                 [&](std::size_t i) { return fn(*todo[i], todo[i]->artifacts.at(metric)); });
    std::vector<std::pair<std::string, T>> out;
    for (std::size_t i = 0; i < todo.size(); ++i) {
      if (slots[i].value)
        out.emplace_back(todo[i]->id, std::move(*slots[i].value));
      else
        warn(metric + " video " + todo[i]->id + " skipped: " + slots[i].error);
    }
    require(!out.empty(), ErrorCode::kEmptyInput, "no video could be scored");
    return out;
  }
};

inline double mean_of(const std::map<std::string, double>& m) {
  double s = 0.0;
  for (const auto& [k, v] : m) s += v;
  return s / static_cast<double>(m.size());
}

inline void eval_g1(Context& ctx, DimensionResult& d) {
  auto records = load::json_as<std::vector<generation::ObjectConfidence>>(load::path_of(ctx.dataset_entry("G1")));
  std::vector<std::uint16_t> classes;
  for (const auto& c : ctx.manifest.classes.objects) classes.push_back(c.id);
  auto r = generation::subject_fidelity(records, classes);
  d.score = r.total;
  d.per_video = r.per_video;
  d.sub["class_mean_total"] = r.class_mean_total;
  d.sub["instance_weighted_total"] = r.instance_weighted_total;
  for (const auto& [cls, v] : r.per_class) {
    const auto* oc = ctx.manifest.classes.object(cls);
    d.sub["class." + (oc ? oc->name : std::to_string(cls))] = v;
  }
  if (std::abs(r.total - r.instance_weighted_total) > 1e-6)
    d.notes.push_back("nested total differs from the instance-weighted total");
}

inline void eval_g2(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<std::optional<double>>("G2", [&](const VideoEntry&, const Json& e) {
    auto t = load::g2(e);
    auto tracks = generation::group_tracks(t.rows, t.boxes, ctx.manifest.classes);
    return generation::video_subject_coherence(tracks);
  });
  for (auto& [id, v] : rows) {
    if (v)
      d.per_video[id] = *v;
    else
      ctx.warn("G2 video " + id + " skipped: no track spans two or more frames");
  }
  require(!d.per_video.empty(), ErrorCode::kNoUsableTracks, "no video has a usable track");
  d.score = mean_of(d.per_video);
}

inline void eval_temporal(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<numerics::TemporalProfile>(d.id, [&](const VideoEntry&, const Json& e) {
    auto [gen, ref] = load::paired_embeddings(e);
    return numerics::temporal_profile(gen, ref);
  });
  double acm = 0.0, tji = 0.0, mrs = 0.0;
  for (const auto& [id, p] : rows) {
    d.per_video[id] = p.score();
    acm += p.acm;
    tji += p.tji;
    mrs += p.mrs;
  }
  const auto n = static_cast<double>(rows.size());
  d.score = mean_of(d.per_video);
  d.sub["acm"] = acm / n;
  d.sub["tji"] = tji / n;
  d.sub["mrs"] = mrs / n;
}

inline void eval_g4(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<double>("G4", [&](const VideoEntry&, const Json& e) {
    return generation::video_depth_discrepancy(load::embeddings(load::path_of(e), false).values);
  });
  for (const auto& [id, v] : rows) d.per_video[id] = v;
  d.score = mean_of(d.per_video);
}

inline void eval_g6(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<generation::SemanticScores>("G6", [&](const VideoEntry&, const Json& e) {
    return generation::video_semantic_consistency(load::masks(load::path_of(e), ctx.manifest.classes.semantic_count));
  });
  double lfr = 0.0, sac = 0.0, cds = 0.0;
  for (const auto& [id, s] : rows) {
    d.per_video[id] = s.score;
    lfr += s.lfr;
    sac += s.sac;
    cds += s.cds;
  }
  const auto n = static_cast<double>(rows.size());
  d.score = mean_of(d.per_video);
  d.sub["lfr"] = lfr / n;
  d.sub["sac"] = sac / n;
  d.sub["cds"] = cds / n;
}

inline void eval_g7(Context& ctx, DimensionResult& d) {
  const auto& e = ctx.dataset_entry("G7");
  auto real = load::features(load::path_of(e, "real"));
  auto gen = load::features(load::path_of(e, "gen"));
  auto r = generation::perceptual_discrepancy(real, gen);
  d.score = r.value;
  d.sub["n_real"] = static_cast<double>(real.rows());
  d.sub["n_gen"] = static_cast<double>(gen.rows());
  if (r.singular_covariance) d.notes.push_back("fewer samples than feature dimension + 1; covariance is singular");
}

inline void eval_g8(Context& ctx, DimensionResult& d) {
  auto matches = MatchRecordSet::from_json_array(read_json_file(load::path_of(ctx.dataset_entry("G8"))));
  std::map<std::string, std::size_t> frames;
  for (const auto& v : ctx.manifest.videos) frames[v.id] = v.frames;
  auto r = generation::cross_view_consistency(matches, ctx.manifest.camera_pairs, frames);
  d.score = r.total;
  d.per_video = r.per_video;
  d.sub["camera_pairs"] = static_cast<double>(ctx.manifest.camera_pairs.size());
}

inline void eval_r1(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<reconstruction::PhotometricReport>(
      "R1", [&](const VideoEntry&, const Json& e) { return reconstruction::video_photometric_report(load::r1(e)); });
  double psnr = 0.0, ssim = 0.0;
  bool all_lpips = true;
  for (const auto& [id, r] : rows) {
    psnr += r.psnr;
    ssim += r.ssim;
    if (r.lpips)
      d.per_video[id] = *r.lpips;
    else
      all_lpips = false;
  }
  const auto n = static_cast<double>(rows.size());
  d.sub["psnr"] = psnr / n;
  d.sub["ssim"] = ssim / n;
  if (all_lpips) {
    d.score = mean_of(d.per_video);
  } else {
    d.per_video.clear();
    d.notes.push_back("perceptual distances not supplied for every video; only PSNR and SSIM are reported");
  }
}

inline void eval_r2(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<reconstruction::DepthErrorReport>("R2", [&](const VideoEntry&, const Json& e) {
    auto [pred, gt] = load::r2(e);
    return reconstruction::video_geometric_report(pred, gt);
  });
  std::vector<reconstruction::DepthErrorReport> reports;
  for (const auto& [id, r] : rows) {
    d.per_video[id] = r.abs_rel;
    reports.push_back(r);
  }
  auto mean = reconstruction::mean_reports(reports);
  d.score = mean_of(d.per_video);
  d.sub["rmse"] = mean.rmse;
  d.sub["delta1"] = mean.delta[0];
  d.sub["delta2"] = mean.delta[1];
  d.sub["delta3"] = mean.delta[2];
}

inline void eval_r3(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<std::map<std::string, double>>("R3", [&](const VideoEntry&, const Json& e) {
    auto scores = load::json_as<std::map<std::string, std::vector<double>>>(load::path_of(e));
    return reconstruction::novel_view_quality(scores).per_condition;
  });
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& [id, conds] : rows)
    for (const auto& [c, v] : conds) {
      acc[c].first += v;
      acc[c].second += 1;
    }
  std::map<std::string, double> per_condition;
  for (const auto& [c, a] : acc) per_condition[c] = a.first / static_cast<double>(a.second);
  auto s = reconstruction::average_conditions(per_condition);
  d.score = s.average;
  for (const auto& [c, v] : s.per_condition) d.sub[c] = v;
}

inline void eval_r4(Context& ctx, DimensionResult& d) {
  std::map<std::string, reconstruction::FeaturePair> features;
  for (const auto& [cond, sides] : ctx.dataset_entry("R4").items())
    features[cond] = {load::features(load::path_of(sides, "real")), load::features(load::path_of(sides, "gen"))};
  auto s = reconstruction::novel_view_discrepancy(features);
  d.score = s.average;
  for (const auto& [c, v] : s.per_condition) d.sub[c] = v;
}

inline void eval_a1(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<double>("A1", [&](const VideoEntry&, const Json& e) {
    auto p = TrajectoryPair::from_json(read_json_file(load::path_of(e)));
    return action::video_displacement_error(p.gen, p.gt);
  });
  for (const auto& [id, v] : rows) d.per_video[id] = v;
  d.score = mean_of(d.per_video);
}

inline void eval_episodes(Context& ctx, DimensionResult& d) {
  auto episodes = load::json_as<std::vector<action::EpisodeSubScores>>(load::path_of(ctx.dataset_entry(d.id)));
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    if (episodes[i].episode_id.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "episode_%04zu", i);
      episodes[i].episode_id = buf;
    }
  }
  auto s = action::summarize_episodes(episodes);
  const auto& values = d.id == "A2" ? s.per_episode_pdms : d.id == "A3" ? s.per_episode_rc : s.per_episode_ads;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    require(d.per_video.emplace(episodes[i].episode_id, values[i]).second, ErrorCode::kInvariantViolation,
            "duplicate episode id '" + episodes[i].episode_id + "'");
  }
  d.score = d.id == "A2" ? s.pdms : d.id == "A3" ? s.route_completion : s.ads;
  d.sub["episodes"] = static_cast<double>(episodes.size());
  if (d.id == "A3" || d.id == "A4")
    for (const auto& id : s.clamped_episodes)
      ctx.warn(d.id + " episode " + id + ": completed distance exceeds route length; clamped to 1");
}

inline void eval_d1(Context& ctx, DimensionResult& d) {
  const auto& classes = ctx.manifest.classes;
  auto rows = ctx.per_video<downstream::BevResult>("D1", [&](const VideoEntry&, const Json& e) {
    auto pred = load::masks(load::path_of(e, "pred"), classes.bev_count);
    auto gt = load::masks(load::path_of(e, "gt"), classes.bev_count);
    return downstream::video_bev_miou(pred, gt, classes.bev_evaluated);
  });
  std::vector<downstream::BevResult> results;
  for (const auto& [id, r] : rows) {
    d.per_video[id] = r.miou;
    results.push_back(r);
  }
  auto total = downstream::bev_miou(results);
  d.score = mean_of(d.per_video);
  for (const auto& [c, v] : total.per_class) d.sub["class." + std::to_string(c)] = v;
}

inline void eval_d2(Context& ctx, DimensionResult& d) {
  auto s = load::json_as<downstream::DetectionSummary>(load::path_of(ctx.dataset_entry("D2")));
  d.score = downstream::nds(s);
  d.sub["mAP"] = s.m_ap;
  d.sub["mATE"] = s.m_ate;
  d.sub["mASE"] = s.m_ase;
  d.sub["mAOE"] = s.m_aoe;
  d.sub["mAVE"] = s.m_ave;
  d.sub["mAAE"] = s.m_aae;
  d.notes.push_back(std::string(downstream::kDetectionProtocol) + "; summary statistics supplied upstream");
}

inline void eval_d3(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<downstream::TrackingResult>("D3", [&](const VideoEntry&, const Json& e) {
    return downstream::amota(downstream::TrackingLog::from_json(read_json_file(load::path_of(e))));
  });
  double mota = 0.0, recall = 0.0;
  for (const auto& [id, r] : rows) {
    d.per_video[id] = r.amota;
    mota += r.mota;
    recall += r.recall;
  }
  const auto n = static_cast<double>(rows.size());
  d.score = mean_of(d.per_video);
  d.sub["mota"] = mota / n;
  d.sub["recall"] = recall / n;
  d.notes.push_back(std::string(downstream::kTrackingProtocol));
}

inline void eval_d4(Context& ctx, DimensionResult& d) {
  auto rows = ctx.per_video<downstream::RayIouResult>("D4", [&](const VideoEntry&, const Json& e) {
    auto o = load::d4(e);
    return downstream::ray_iou(o.pred, o.gt, o.rays);
  });
  std::vector<double> at(downstream::kRayDeltas.size(), 0.0);
  for (const auto& [id, r] : rows) {
    d.per_video[id] = r.mray_iou;
    for (std::size_t k = 0; k < at.size(); ++k) at[k] += r.ray_iou[k];
  }
  d.score = mean_of(d.per_video);
  for (std::size_t k = 0; k < at.size(); ++k) {
    char key[32];
    std::snprintf(key, sizeof key, "ray_iou@%g", downstream::kRayDeltas[k]);
    d.sub[key] = at[k] / static_cast<double>(rows.size());
  }
}

inline void eval_h(Context& ctx, DimensionResult& d) {
  auto records = load::score_records(load::path_of(ctx.dataset_entry("H")));
  std::vector<preference::ScoreRecord> valid;
  std::size_t invalid = 0;
  for (const auto& r : records) {
    if (preference::validate_record(r).empty())
      valid.push_back(r);
    else
      ++invalid;
  }
  if (invalid > 0) ctx.warn("H: " + std::to_string(invalid) + " score records failed validation and were skipped");
  require(!valid.empty(), ErrorCode::kNoRecords, "no valid score records");
  double total = 0.0;
  for (const auto& r : valid) total += r.score;
  d.score = total / static_cast<double>(valid.size());
  d.sub["records"] = static_cast<double>(valid.size());
  for (auto dim : preference::kDimensions) {
    bool any = std::any_of(valid.begin(), valid.end(), [&](const auto& r) { return r.dimension == dim; });
    if (!any) continue;
    auto s = preference::dimension_stats(valid, dim);
    d.sub[std::string(dim) + ".mean"] = s.mean;
    d.sub[std::string(dim) + ".std"] = s.std;
    d.sub[std::string(dim) + ".median"] = s.median;
  }
}

inline void evaluate_metric(Context& ctx, DimensionResult& d) {
  static const std::map<std::string, std::function<void(Context&, DimensionResult&)>> kEvaluators = {
      {"G1", eval_g1},       {"G2", eval_g2},       {"G3", eval_temporal}, {"G4", eval_g4},
      {"G5", eval_temporal}, {"G6", eval_g6},       {"G7", eval_g7},       {"G8", eval_g8},
      {"R1", eval_r1},       {"R2", eval_r2},       {"R3", eval_r3},       {"R4", eval_r4},
      {"A1", eval_a1},       {"A2", eval_episodes}, {"A3", eval_episodes}, {"A4", eval_episodes},
      {"D1", eval_d1},       {"D2", eval_d2},       {"D3", eval_d3},       {"D4", eval_d4},
      {"H", eval_h}};
  kEvaluators.at(d.id)(ctx, d);
}

inline Json run_settings(const EvaluationManifest& m) {
  Json thresholds = Json::object();
  for (const auto& c : m.classes.objects) thresholds[c.name] = c.threshold;
  return Json{{"object_thresholds", thresholds},
              {"temporal", {{"beta", numerics::kTemporalBeta}, {"eps", numerics::kTemporalEps}}},
              {"semantic", {{"erosion_radius", generation::kDefaultErosionRadius},
                            {"weights", {0.5, 0.4, 0.1}}}},
              {"tracking", {{"match_distance", 2.0}, {"recall_points", 40}}},
              {"ray_deltas", downstream::kRayDeltas},
              {"camera_pairs", m.camera_pairs.size()}};
}

}  // namespace engine_detail

/// Accepts catalog ids and the "H-stats" alias for the human-preference entry.
inline std::string normalize_metric_id(const std::string& id) {
  const std::string canonical = id == "H-stats" ? "H" : id;
  require(find_metric(canonical) != nullptr, ErrorCode::kManifestError, "unknown metric id '" + id + "'");
  return canonical;
}

inline MetricReport run_evaluation(const RunConfig& config) {
  require(config.workers >= 1, ErrorCode::kOutOfRange, "worker count must be at least 1");
  EvaluationManifest manifest;
  std::string manifest_bytes;
  try {
    manifest_bytes = read_text_file(config.manifest);
    manifest = parse_manifest(parse_json_text(manifest_bytes, config.manifest.string()),
                              config.manifest.parent_path(), /*strict=*/false);
    manifest.source = config.manifest;
  } catch (const Error& e) {
    fail(ErrorCode::kManifestError, e.what());
  }

  std::vector<std::string> metrics;
  for (const auto& id : config.metrics.empty() ? manifest.metrics : config.metrics) {
    auto canonical = normalize_metric_id(id);
    if (std::find(metrics.begin(), metrics.end(), canonical) == metrics.end()) metrics.push_back(canonical);
  }
  require(!metrics.empty(), ErrorCode::kNoMetricsSelected, "no metrics selected");
  std::sort(metrics.begin(), metrics.end(), [](const auto& a, const auto& b) { return metric_rank(a) < metric_rank(b); });

  MetricReport report;
  report.config_hash = config_hash(manifest_bytes, metrics);
  report.run_id = manifest.run_id;
  report.model_id = manifest.model_id;
  report.settings = engine_detail::run_settings(manifest);
  engine_detail::Context ctx{manifest, config.workers, report.warnings};

  for (const auto& id : metrics) {
    DimensionResult d;
    d.id = id;
    bool dataset_gap = false;
    for (const auto& issue : check_metric_artifacts(manifest, id)) {
      ctx.warn(id + (issue.video.empty() ? "" : " video " + issue.video) + ": missing artifact, " + issue.message);
      if (issue.video.empty()) dataset_gap = true;
    }
    if (!dataset_gap) {
      try {
        engine_detail::evaluate_metric(ctx, d);
      } catch (const std::exception& e) {
        d = DimensionResult{};
        d.id = id;
        ctx.warn(id + " failed: " + e.what());
      }
    }
    report.dimensions.push_back(std::move(d));
  }
  return report;
}

/// Writes the report in each requested format under `dir`.
inline std::vector<std::filesystem::path> emit_report(const MetricReport& r, const std::filesystem::path& dir,
                                                      const std::vector<ReportFormat>& formats) {
  std::vector<std::filesystem::path> written;
  for (auto f : formats) {
    auto path = dir / report_file_name(f);
    try {
      write_text_file(path, render_report(r, f));
    } catch (const std::filesystem::filesystem_error& e) {
      fail(ErrorCode::kIoFailure, e.what());
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace wmeval

#endif  // WMEVAL_ENGINE_HPP
