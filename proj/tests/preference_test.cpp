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

#include <algorithm>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "wmeval/wmeval.hpp"

namespace {

using namespace wmeval;
using namespace wmeval::preference;

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

ScoreRecord record(double score, std::string dim = "overall_realism", std::string group = "A",
                   std::string video = "v1", std::string model = "m1", std::string why = "stable geometry") {
  return {std::move(video), std::move(model), std::move(dim), std::move(group), score, std::move(why), std::nullopt};
}

TEST(Validate, ReportsEveryViolation) {
  EXPECT_TRUE(validate_record(record(7)).empty());
  auto v = validate_record(record(11));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], Violation::kScoreOutOfRange);
  auto many = validate_record(record(0.5, "color", "C", "", "m", "   "));
  std::vector<Violation> expected = {Violation::kScoreOutOfRange, Violation::kNonIntegerScore,
                                     Violation::kEmptyRationale,  Violation::kUnknownDimension,
                                     Violation::kUnknownGroup,    Violation::kMissingId};
  EXPECT_EQ(many, expected);
  EXPECT_EQ(to_string(Violation::kEmptyRationale), "EmptyRationale");
}

TEST(Stats, HandSortedInterpolation) {
  std::vector<ScoreRecord> r = {record(2), record(4), record(2), record(2)};
  auto s = dimension_stats(r, "overall_realism");
  EXPECT_EQ(s.count, 4u);
  EXPECT_DOUBLE_EQ(s.min, 2);
  EXPECT_DOUBLE_EQ(s.max, 4);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.median, 2);
  EXPECT_DOUBLE_EQ(s.q25, 2);
  EXPECT_DOUBLE_EQ(s.q75, 2.5);
  EXPECT_DOUBLE_EQ(s.std, 1.0);
}

TEST(Stats, SingleAndConstantRecords) {
  std::vector<ScoreRecord> one = {record(6)};
  auto s = dimension_stats(one, "overall_realism");
  EXPECT_DOUBLE_EQ(s.std, 0.0);
  EXPECT_DOUBLE_EQ(s.min, s.max);
  EXPECT_DOUBLE_EQ(s.median, 6.0);
  std::vector<ScoreRecord> same(5, record(3));
  auto c = dimension_stats(same, "overall_realism");
  EXPECT_DOUBLE_EQ(c.std, 0.0);
  EXPECT_DOUBLE_EQ(c.q25, c.q75);
  EXPECT_EQ(code_of([&] { dimension_stats(one, "vehicle_realism"); }), ErrorCode::kNoRecords);
  EXPECT_EQ(code_of([&] { dimension_stats(one, "overall_realism", "other"); }), ErrorCode::kNoRecords);
}

TEST(Stats, MatchesSortOracleAndIsPermutationInvariant) {
  fixtures::Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ScoreRecord> r;
    std::vector<double> values;
    const int n = rng.integer(1, 40);
    for (int i = 0; i < n; ++i) {
      double v = rng.integer(1, 10);
      r.push_back(record(v));
      values.push_back(v);
    }
    auto s = dimension_stats(r, "overall_realism");
    EXPECT_NEAR(s.median, oracle::sorted_quantile(values, 0.5), 1e-9);
    EXPECT_NEAR(s.q25, oracle::sorted_quantile(values, 0.25), 1e-9);
    EXPECT_NEAR(s.q75, oracle::sorted_quantile(values, 0.75), 1e-9);
    EXPECT_NEAR(s.std, oracle::sample_std(values), 1e-9);
    EXPECT_LE(s.min, s.q25);
    EXPECT_LE(s.q25, s.median);
    EXPECT_LE(s.median, s.q75);
    EXPECT_LE(s.q75, s.max);
    std::shuffle(r.begin(), r.end(), rng.engine());
    auto t = dimension_stats(r, "overall_realism");
    EXPECT_DOUBLE_EQ(t.median, s.median);
    EXPECT_NEAR(t.mean, s.mean, 1e-12);
  }
}

TEST(Stats, FiltersByModel) {
  std::vector<ScoreRecord> r = {record(2, "overall_realism", "A", "v1", "m1"),
                                record(8, "overall_realism", "A", "v1", "m2")};
  EXPECT_DOUBLE_EQ(dimension_stats(r, "overall_realism", "m2").mean, 8.0);
  EXPECT_DOUBLE_EQ(dimension_stats(r, "overall_realism").mean, 5.0);
}

TEST(Reconcile, ThresholdExamples) {
  std::vector<ScoreRecord> same = {record(2, "overall_realism", "A"), record(2, "overall_realism", "B")};
  EXPECT_TRUE(reconcile_groups(same, 2).empty());
  std::vector<ScoreRecord> apart = {record(2, "overall_realism", "A"), record(6, "overall_realism", "B")};
  auto d = reconcile_groups(apart, 2);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d[0].score_a, 2);
  EXPECT_DOUBLE_EQ(d[0].score_b, 6);
  EXPECT_EQ(reconcile_groups(same, 0).size(), 1u);
  EXPECT_TRUE(reconcile_groups(apart, 10).empty());
}

TEST(Reconcile, MatchesPairwiseLoop) {
  fixtures::Rng rng(8);
  std::vector<ScoreRecord> r;
  for (int v = 0; v < 5; ++v)
    for (auto dim : kDimensions) {
      std::string vid = "v" + std::to_string(v);
      if (rng.uniform() < 0.8) r.push_back(record(rng.integer(1, 10), std::string(dim), "A", vid));
      if (rng.uniform() < 0.8) r.push_back(record(rng.integer(1, 10), std::string(dim), "B", vid));
    }
  std::shuffle(r.begin(), r.end(), rng.engine());
  std::vector<std::tuple<std::string, std::string, std::string>> expected;
  for (const auto& a : r)
    for (const auto& b : r)
      if (a.group_id == "A" && b.group_id == "B" && a.video_id == b.video_id && a.dimension == b.dimension &&
          a.model_id == b.model_id && std::abs(a.score - b.score) >= 3)
        expected.emplace_back(a.video_id, a.model_id, a.dimension);
  std::sort(expected.begin(), expected.end());
  std::vector<std::tuple<std::string, std::string, std::string>> got;
  for (const auto& d : reconcile_groups(r, 3)) got.emplace_back(d.video_id, d.model_id, d.dimension);
  EXPECT_EQ(got, expected);
}

TEST(Sft, TwoKeyLinesOnHalfGrid) {
  std::vector<ScoreRecord> r = {record(7, "overall_realism", "A", "v1", "m1", "stable geometry"), record(10),
                                record(1, "behavioral_safety", "B")};
  auto text = export_sft(r);
  EXPECT_EQ(text.substr(0, text.find('\n')), R"({"score":7.0,"reason":"stable geometry"})");
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    auto j = Json::parse(line);
    ASSERT_TRUE(j.is_object());
    EXPECT_EQ(j.size(), 2u);
    EXPECT_TRUE(j.contains("score"));
    EXPECT_TRUE(j.contains("reason"));
    double s = j.at("score").get<double>();
    EXPECT_DOUBLE_EQ(s * 2.0, std::round(s * 2.0));
    EXPECT_GE(s, 1.0);
    EXPECT_LE(s, 10.0);
    ++n;
  }
  EXPECT_EQ(n, 3u);
  std::vector<ScoreRecord> bad = {record(7), record(12)};
  EXPECT_EQ(code_of([&] { export_sft(bad); }), ErrorCode::kUnvalidatedRecord);
  EXPECT_DOUBLE_EQ(to_sft_score(7.26), 7.5);
  EXPECT_DOUBLE_EQ(to_sft_score(12.0), 10.0);
}

TEST(Keywords, LowercasedWithoutStopWords) {
  std::vector<ScoreRecord> r = {record(5, "overall_realism", "A", "v", "m", "The car is Stable, the road is stable."),
                                record(5, "overall_realism", "A", "v", "m", "Blurry car")};
  auto k = keyword_counts(r);
  EXPECT_EQ(k.at("stable"), 2u);
  EXPECT_EQ(k.at("car"), 2u);
  EXPECT_EQ(k.at("road"), 1u);
  EXPECT_EQ(k.count("the"), 0u);
  EXPECT_EQ(k.count("is"), 0u);
}

TEST(Records, ParseAndRoundTrip) {
  auto r = record(4);
  r.duration_seconds = 12.5;
  Json j = r;
  auto back = parse_records({j});
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].rationale, r.rationale);
  EXPECT_EQ(*back[0].duration_seconds, 12.5);
  EXPECT_EQ(code_of([&] { parse_records({Json::parse(R"({"video_id":"x"})")}); }), ErrorCode::kParseError);
}

}  // namespace
