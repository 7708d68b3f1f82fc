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

#include <gtest/gtest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "wmeval/wmeval.hpp"

namespace {

using namespace wmeval;
using namespace wmeval::generation;

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kManifestError;
}

Matrix from_rows(std::vector<std::vector<double>> rows) {
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[0].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

LabelMaskSequence masks(std::size_t frames, std::size_t h, std::size_t w, std::uint16_t classes,
                        std::vector<std::uint16_t> labels) {
  LabelMaskSequence m;
  m.frames = frames;
  m.height = h;
  m.width = w;
  m.class_count = classes;
  m.labels = std::move(labels);
  m.check();
  return m;
}

std::vector<oracle::Frame> to_frames(const LabelMaskSequence& m) {
  std::vector<oracle::Frame> out;
  for (std::size_t t = 0; t < m.frames; ++t) {
    oracle::Frame f(m.height, std::vector<int>(m.width));
    auto src = m.frame(t);
    for (std::size_t r = 0; r < m.height; ++r)
      for (std::size_t c = 0; c < m.width; ++c) f[r][c] = src[r * m.width + c];
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subject fidelity

TEST(SubjectFidelity, NestedMeansOverInstancesFramesClassesVideos) {
  std::vector<ObjectConfidence> r = {
      {"a", 0, 1, 0, 0.8}, {"a", 0, 2, 0, 0.4},  // frame mean 0.6
      {"a", 1, 1, 0, 1.0},                       // class 0 in a: (0.6 + 1.0) / 2 = 0.8
      {"a", 0, 3, 1, 0.2},                       // class 1 in a: 0.2
      {"b", 0, 1, 0, 0.5},                       // class 0 in b: 0.5
  };
  std::vector<std::uint16_t> classes = {0, 1};
  auto res = subject_fidelity(r, classes);
  EXPECT_NEAR(res.per_video.at("a"), 0.5, 1e-12);
  EXPECT_NEAR(res.per_video.at("b"), 0.5, 1e-12);
  EXPECT_NEAR(res.total, 0.5, 1e-12);
  EXPECT_NEAR(res.per_class.at(0), 0.65, 1e-12);
  EXPECT_NEAR(res.per_class.at(1), 0.2, 1e-12);
  EXPECT_NEAR(res.class_mean_total, 0.425, 1e-12);
  EXPECT_NEAR(res.instance_weighted_total, 2.9 / 5.0, 1e-12);
}

TEST(SubjectFidelity, ErrorsAndBounds) {
  std::vector<std::uint16_t> classes = {0};
  EXPECT_EQ(code_of([&] { subject_fidelity({}, classes); }), ErrorCode::kEmptyInput);
  std::vector<ObjectConfidence> bad = {{"a", 0, 1, 0, 1.5}};
  EXPECT_EQ(code_of([&] { subject_fidelity(bad, classes); }), ErrorCode::kOutOfRange);
  std::vector<ObjectConfidence> unknown = {{"a", 0, 1, 7, 0.5}};
  EXPECT_EQ(code_of([&] { subject_fidelity(unknown, classes); }), ErrorCode::kOutOfRange);

  fixtures::Rng rng(1);
  std::vector<ObjectConfidence> many;
  for (int i = 0; i < 200; ++i)
    many.push_back({"v" + std::to_string(i % 3), static_cast<std::size_t>(i % 5), i, 0, rng.uniform()});
  auto res = subject_fidelity(many, classes);
  EXPECT_GE(res.total, 0.0);
  EXPECT_LE(res.total, 1.0);
}

TEST(SubjectFidelity, ParsesJsonRecord) {
  auto r = Json::parse(R"({"video_id":"x","frame":3,"track_id":9,"class_id":1,"confidence":0.7})")
               .get<ObjectConfidence>();
  EXPECT_EQ(r.video_id, "x");
  EXPECT_EQ(r.frame_index, 3u);
  EXPECT_EQ(r.track_id, 9);
  EXPECT_EQ(r.class_id, 1);
  EXPECT_DOUBLE_EQ(r.confidence, 0.7);
}

// ---------------------------------------------------------------------------
// Subject coherence

TEST(SubjectCoherence, TrackMeanOfAdjacentCosines) {
  Matrix t = from_rows({{1, 0}, {0, 1}, {0, 1}});
  EXPECT_NEAR(track_coherence(t), 0.5, 1e-12);
  Matrix one = from_rows({{1, 0}});
  EXPECT_EQ(code_of([&] { track_coherence(one); }), ErrorCode::kTooShort);
}

TEST(SubjectCoherence, SkipsShortTracksAndEmptyVideos) {
  std::vector<Matrix> v1 = {from_rows({{1, 0}, {1, 0}}), from_rows({{1, 0}})};
  std::vector<Matrix> v2 = {from_rows({{1, 0}})};
  std::vector<Matrix> v3 = {from_rows({{1, 0}, {0, 1}})};
  EXPECT_NEAR(*video_subject_coherence(v1), 1.0, 1e-12);
  EXPECT_FALSE(video_subject_coherence(v2).has_value());
  std::vector<std::vector<Matrix>> all = {v1, v2, v3};
  EXPECT_NEAR(subject_coherence(all), 0.5, 1e-12);
  std::vector<std::vector<Matrix>> none = {v2};
  EXPECT_EQ(code_of([&] { subject_coherence(none); }), ErrorCode::kNoUsableTracks);
}

TEST(SubjectCoherence, GroupTracksFiltersByClassThreshold) {
  ClassTables classes;
  classes.objects = {{0, "vehicle", 0.25}, {1, "pedestrian", 0.5}};
  TrackedBoxSet boxes;
  boxes.entries = {
      {1, 10, 0, {}, {1, 1, 1}, 0.0, 0.9, {}},
      {0, 10, 0, {}, {1, 1, 1}, 0.0, 0.3, {}},
      {0, 20, 1, {}, {1, 1, 1}, 0.0, 0.4, {}},  // below the pedestrian threshold
      {1, 20, 1, {}, {1, 1, 1}, 0.0, 0.6, {}},
  };
  EmbeddingSequence rows;
  rows.values = from_rows({{1, 0}, {0, 1}, {1, 1}, {2, 2}});
  auto tracks = group_tracks(rows, boxes, classes);
  ASSERT_EQ(tracks.size(), 2u);
  EXPECT_EQ(tracks[0], from_rows({{0, 1}, {1, 0}}));  // sorted by frame
  EXPECT_EQ(tracks[1], from_rows({{2, 2}}));
  rows.values = from_rows({{1, 0}});
  EXPECT_EQ(code_of([&] { group_tracks(rows, boxes, classes); }), ErrorCode::kLengthMismatch);
}

// ---------------------------------------------------------------------------
// Subject and temporal consistency

TEST(Consistency, ToyPairMatchesFrozenScore) {
  Matrix gen = from_rows({{1, 0, 0}, {1, 1, 0}, {1, 2, 1}, {2, 2, 1}});
  Matrix ref = from_rows({{1, 0, 0}, {1, 0.5, 0}, {1, 1.5, 0.5}, {1.5, 2, 1}});
  EXPECT_NEAR(video_consistency(gen, ref), 0.3612014408750944, 1e-12);
  std::vector<std::pair<Matrix, Matrix>> videos = {{gen, ref}, {gen, gen}};
  auto r = temporal_consistency(videos);
  ASSERT_EQ(r.per_video.size(), 2u);
  EXPECT_NEAR(r.score, 0.5 * (r.per_video[0] + r.per_video[1]), 1e-12);
  EXPECT_NEAR(r.mrs, 0.5 * (0.8363860392870109 + 1.0), 1e-12);
  EXPECT_NEAR(subject_consistency(videos).score, r.score, 0.0);
}

TEST(Consistency, ScoreStaysInUnitInterval) {
  fixtures::Rng rng(2);
  for (int i = 0; i < 30; ++i) {
    Matrix g = fixtures::unit_walk(rng, 6, 4, 0.5), f = fixtures::unit_walk(rng, 6, 4, 0.1);
    double s = video_consistency(g, f);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
    EXPECT_LE(video_consistency(g, g), 1.0 + 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Depth discrepancy

TEST(DepthDiscrepancy, MeanStepLength) {
  Matrix f = from_rows({{0, 0}, {3, 4}, {3, 4}});
  EXPECT_NEAR(video_depth_discrepancy(f), 2.5, 1e-12);
  std::vector<Matrix> videos = {f, from_rows({{0, 0}, {0, 1}})};
  EXPECT_NEAR(depth_discrepancy(videos), 1.75, 1e-12);
  EXPECT_EQ(code_of([&] { video_depth_discrepancy(from_rows({{1, 1}})); }), ErrorCode::kTooShort);
  Matrix still(4, 3, 0.5);
  EXPECT_DOUBLE_EQ(video_depth_discrepancy(still), 0.0);
}

// ---------------------------------------------------------------------------
// Semantic consistency

TEST(Semantic, StaticSequenceScoresOne) {
  fixtures::Rng rng(3);
  auto frame = fixtures::blob_frames(rng, 1, 8, 8, 3, 3);
  std::vector<std::uint16_t> labels;
  for (int t = 0; t < 3; ++t) labels.insert(labels.end(), frame.begin(), frame.end());
  auto m = masks(3, 8, 8, 3, labels);
  auto s = video_semantic_consistency(m);
  EXPECT_DOUBLE_EQ(s.lfr, 1.0);
  EXPECT_DOUBLE_EQ(s.sac, 1.0);
  EXPECT_DOUBLE_EQ(s.cds, 1.0);
  EXPECT_DOUBLE_EQ(s.score, 1.0);
}

TEST(Semantic, FullSwapOfTwoClasses) {
  // Two 4x4 frames split in halves; the halves swap labels.
  std::vector<std::uint16_t> labels;
  for (int t = 0; t < 2; ++t)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) labels.push_back(static_cast<std::uint16_t>((c < 2) == (t == 0) ? 0 : 1));
  auto m = masks(2, 4, 4, 2, labels);
  // Interiors under radius 1 are empty on a 4x2 strip, so nothing flips.
  EXPECT_DOUBLE_EQ(label_flip_ratio(m, 0, 1), 0.0);
  EXPECT_DOUBLE_EQ(label_flip_ratio(m, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(segment_association(m, 0), 0.0);
  auto s = video_semantic_consistency(m);
  EXPECT_DOUBLE_EQ(s.cds, 1.0);  // identical histograms
}

TEST(Semantic, MatchesOracleOnRandomMasks) {
  fixtures::Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    auto labels = fixtures::blob_frames(rng, 3, 8, 8, 3, 4);
    auto m = masks(3, 8, 8, 3, labels);
    auto got = video_semantic_consistency(m);
    auto want = oracle::semantic(to_frames(m), 3, 1);
    EXPECT_NEAR(got.lfr, want.lfr, 1e-9);
    EXPECT_NEAR(got.sac, want.sac, 1e-9);
    EXPECT_NEAR(got.cds, want.cds, 1e-9);
    EXPECT_NEAR(got.score, 0.5 * want.lfr + 0.4 * want.sac + 0.1 * want.cds, 1e-9);
    EXPECT_GE(got.score, 0.0);
    EXPECT_LE(got.score, 1.0);
  }
}

TEST(Semantic, ErrorsAndAggregation) {
  auto single = masks(1, 2, 2, 2, {0, 1, 1, 0});
  EXPECT_EQ(code_of([&] { video_semantic_consistency(single); }), ErrorCode::kSingleFrame);
  std::vector<LabelMaskSequence> none;
  EXPECT_EQ(code_of([&] { semantic_consistency(none); }), ErrorCode::kEmptyInput);

  auto a = masks(2, 2, 2, 2, {0, 1, 1, 0, 0, 1, 1, 0});
  auto b = masks(2, 2, 2, 2, {0, 0, 0, 0, 1, 1, 1, 1});
  std::vector<LabelMaskSequence> both = {a, b};
  auto r = semantic_consistency(both);
  ASSERT_EQ(r.per_video.size(), 2u);
  EXPECT_NEAR(r.mean.score, 0.5 * (r.per_video[0].score + r.per_video[1].score), 1e-12);
}

// ---------------------------------------------------------------------------
// Perceptual discrepancy

TEST(Perceptual, FlagsSingularCovariance) {
  fixtures::Rng rng(5);
  Matrix real = fixtures::random_matrix(rng, 3, 4), gen = fixtures::random_matrix(rng, 10, 4);
  auto r = perceptual_discrepancy(real, gen);
  EXPECT_TRUE(r.singular_covariance);
  EXPECT_GE(r.value, 0.0);
  Matrix big = fixtures::random_matrix(rng, 20, 4);
  EXPECT_FALSE(perceptual_discrepancy(big, gen).singular_covariance);
  EXPECT_NEAR(perceptual_discrepancy(big, big).value, 0.0, 1e-9);
  Matrix other = fixtures::random_matrix(rng, 20, 3);
  EXPECT_EQ(code_of([&] { perceptual_discrepancy(big, other); }), ErrorCode::kDimMismatch);
}

// ---------------------------------------------------------------------------
// Cross-view consistency

TEST(CrossView, SumsConfidencesPerPairAndFrame) {
  auto records = MatchRecordSet::from_json_array(Json::parse(R"([
    {"video_id":"a","frame":0,"camera_pair":[0,1],"confidences":[0.5,0.5,1.0]},
    {"video_id":"a","frame":1,"camera_pair":[1,0],"confidences":[1.0]},
    {"video_id":"b","frame":0,"camera_pair":[0,1],"confidences":[0.2]}
  ])"));
  std::vector<CameraPair> pairs = {{0, 1}, {1, 0}};
  std::map<std::string, std::size_t> frames = {{"a", 2}, {"b", 1}, {"c", 4}};
  auto r = cross_view_consistency(records, pairs, frames);
  EXPECT_NEAR(r.per_video.at("a"), 3.0 / 4.0, 1e-12);
  EXPECT_NEAR(r.per_video.at("b"), 0.2 / 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.per_video.at("c"), 0.0);
  EXPECT_NEAR(r.total, (0.75 + 0.1 + 0.0) / 3.0, 1e-12);
}

TEST(CrossView, RejectsUnknownReferences) {
  std::vector<CameraPair> pairs = {{0, 1}};
  std::map<std::string, std::size_t> frames = {{"a", 2}};
  auto pair = MatchRecordSet::from_json_array(
      Json::parse(R"([{"video_id":"a","frame":0,"camera_pair":[2,3],"confidences":[0.5]}])"));
  EXPECT_EQ(code_of([&] { cross_view_consistency(pair, pairs, frames); }), ErrorCode::kUnknownPair);
  auto video = MatchRecordSet::from_json_array(
      Json::parse(R"([{"video_id":"z","frame":0,"camera_pair":[0,1],"confidences":[0.5]}])"));
  EXPECT_EQ(code_of([&] { cross_view_consistency(video, pairs, frames); }), ErrorCode::kDanglingReference);
  auto frame = MatchRecordSet::from_json_array(
      Json::parse(R"([{"video_id":"a","frame":5,"camera_pair":[0,1],"confidences":[0.5]}])"));
  EXPECT_EQ(code_of([&] { cross_view_consistency(frame, pairs, frames); }), ErrorCode::kOutOfRange);
}

}  // namespace
