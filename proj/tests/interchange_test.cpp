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

#include <cstring>
#include <filesystem>
#include <fstream>

#include "support/fixtures.hpp"
#include "wmeval/wmeval.hpp"

namespace {

using namespace wmeval;

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

std::vector<std::byte> bytes_of(std::initializer_list<int> v) {
  std::vector<std::byte> out;
  for (int b : v) out.push_back(static_cast<std::byte>(b));
  return out;
}

TEST(Tensor, RoundTripsTwoByThreeFloat) {
  std::vector<float> v = {1, 2, 3, 4, 5, 6};
  auto t = TensorFile::from<float>({2, 3}, v);
  auto bytes = encode_tensor(t);
  EXPECT_EQ(bytes.size(), 8u + 2 * 8 + 24);
  auto back = decode_tensor(bytes);
  EXPECT_EQ(back, t);
  EXPECT_EQ(back.values<float>(), v);
}

TEST(Tensor, HeaderLayoutIsLittleEndian) {
  std::vector<std::uint16_t> v = {0x0102};
  auto bytes = encode_tensor(TensorFile::from<std::uint16_t>({1}, v));
  ASSERT_EQ(bytes.size(), 8u + 8 + 2);
  EXPECT_EQ(std::memcmp(bytes.data(), "WLT1", 4), 0);
  EXPECT_EQ(bytes[4], std::byte{3});
  EXPECT_EQ(bytes[5], std::byte{1});
  EXPECT_EQ(bytes[6], std::byte{0});
  EXPECT_EQ(bytes[7], std::byte{0});
  EXPECT_EQ(bytes[8], std::byte{1});
  EXPECT_EQ(bytes[16], std::byte{0x02});
  EXPECT_EQ(bytes[17], std::byte{0x01});
}

TEST(Tensor, SingleFloatFileSizes) {
  std::vector<float> zero = {0.0f};
  // 8-byte fixed header + one u64 per dimension + 4-byte payload.
  EXPECT_EQ(encode_tensor(TensorFile::from<float>({1, 1}, zero)).size(), 28u);
  EXPECT_EQ(encode_tensor(TensorFile::from<float>({1}, zero)).size(), 20u);
}

TEST(Tensor, RejectsBadMagic) {
  std::vector<float> v = {1, 2, 3, 4, 5, 6};
  auto bytes = encode_tensor(TensorFile::from<float>({2, 3}, v));
  std::memcpy(bytes.data(), "XXXX", 4);
  EXPECT_EQ(code_of([&] { decode_tensor(bytes); }), ErrorCode::kBadMagic);
}

TEST(Tensor, RejectsTruncatedPayload) {
  std::vector<float> v = {1, 2, 3, 4, 5, 6};
  auto bytes = encode_tensor(TensorFile::from<float>({2, 3}, v));
  bytes.resize(bytes.size() - 4);  // 20 payload bytes instead of 24
  EXPECT_EQ(code_of([&] { decode_tensor(bytes); }), ErrorCode::kTruncatedPayload);
  auto header_only = bytes_of({'W', 'L', 'T', '1', 1, 2, 0});
  EXPECT_EQ(code_of([&] { decode_tensor(header_only); }), ErrorCode::kTruncatedPayload);
}

TEST(Tensor, RejectsUnknownDtypeAndTrailingBytes) {
  std::vector<float> v = {1};
  auto bytes = encode_tensor(TensorFile::from<float>({1}, v));
  auto bad = bytes;
  bad[4] = std::byte{9};
  EXPECT_EQ(code_of([&] { decode_tensor(bad); }), ErrorCode::kUnknownDtype);
  bytes.push_back(std::byte{0});
  EXPECT_EQ(code_of([&] { decode_tensor(bytes); }), ErrorCode::kInvariantViolation);
}

TEST(Tensor, RejectsShapeOverflow) {
  auto bytes = bytes_of({'W', 'L', 'T', '1', 2, 2, 0, 0});
  for (int d = 0; d < 2; ++d) detail::put_u64_le(bytes, std::uint64_t{1} << 30);
  EXPECT_EQ(code_of([&] { decode_tensor(bytes); }), ErrorCode::kShapeOverflow);
}

TEST(Tensor, RejectsEmptyAndZeroShapes) {
  TensorFile t{DType::kF32, {}, {}};
  EXPECT_EQ(code_of([&] { encode_tensor(t); }), ErrorCode::kInvariantViolation);
  TensorFile z{DType::kU8, {3, 0}, {}};
  EXPECT_EQ(code_of([&] { encode_tensor(z); }), ErrorCode::kInvariantViolation);
}

TEST(Tensor, MaskRoundTripsThroughFile) {
  fixtures::TempDir dir("tensor");
  std::vector<std::uint16_t> v(16);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::uint16_t>(i * 4099);
  auto t = TensorFile::from<std::uint16_t>({4, 4}, v);
  write_tensor(t, dir / "m.wlt");
  EXPECT_EQ(read_tensor(dir / "m.wlt"), t);
  EXPECT_EQ(std::filesystem::file_size(dir / "m.wlt"), 8u + 16 + 32);
  EXPECT_EQ(code_of([&] { read_tensor(dir / "missing.wlt"); }), ErrorCode::kIoFailure);
}

TEST(Artifacts, EmbeddingNormalizationIsChecked) {
  std::vector<float> ok = {1, 0, 0, 1};
  EXPECT_NO_THROW(EmbeddingSequence::from_tensor(TensorFile::from<float>({2, 2}, ok), true));
  std::vector<float> bad = {1, 0, 0, 2};
  auto t = TensorFile::from<float>({2, 2}, bad);
  EXPECT_EQ(code_of([&] { EmbeddingSequence::from_tensor(t, true); }), ErrorCode::kNormalizationMismatch);
  EXPECT_NO_THROW(EmbeddingSequence::from_tensor(t, false));
}

TEST(Artifacts, LabelsMustBeBelowClassCount) {
  std::vector<std::uint16_t> v = {0, 1, 2, 3};
  auto t = TensorFile::from<std::uint16_t>({1, 2, 2}, v);
  EXPECT_NO_THROW(LabelMaskSequence::from_tensor(t, 4));
  EXPECT_EQ(code_of([&] { LabelMaskSequence::from_tensor(t, 3); }), ErrorCode::kLabelOutOfRange);
}

TEST(Artifacts, BoxSetInvariants) {
  auto j = Json::parse(R"([{"frame":0,"track_id":1,"center":[0,0,0]},{"frame":0,"track_id":1,"center":[1,0,0]}])");
  EXPECT_EQ(code_of([&] { TrackedBoxSet::from_json_array(j); }), ErrorCode::kInvariantViolation);
  auto k = Json::parse(R"([{"frame":0,"track_id":1,"center":[0,0,0],"confidence":1.5}])");
  EXPECT_EQ(code_of([&] { TrackedBoxSet::from_json_array(k); }), ErrorCode::kOutOfRange);
  auto ok = Json::parse(R"([{"frame":0,"track_id":1,"center":[0,0,0],"velocity":[1,2]}])");
  auto s = TrackedBoxSet::from_json_array(ok);
  ASSERT_TRUE(s.entries[0].velocity.has_value());
  EXPECT_EQ(Json(s.entries[0]).at("velocity"), Json::parse("[1.0,2.0]"));
}

TEST(Artifacts, MatchConfidencesInUnitInterval) {
  auto j = Json::parse(R"([{"video_id":"a","frame":0,"camera_pair":[0,1],"confidences":[0.2,1.2]}])");
  EXPECT_EQ(code_of([&] { MatchRecordSet::from_json_array(j); }), ErrorCode::kOutOfRange);
}

class ManifestTest : public ::testing::Test {
 protected:
  fixtures::TempDir dir{"manifest"};

  void touch(const std::string& name) {
    std::vector<float> v = {0, 1, 2, 3};
    write_tensor(TensorFile::from<float>({2, 2}, v), dir / name);
  }
};

TEST_F(ManifestTest, LoadsWithBothFeatureSides) {
  touch("real.wlt");
  touch("gen.wlt");
  auto doc = Json::parse(R"({"videos":[{"id":"b","frames":2},{"id":"a","frames":2}],
    "dataset":{"G7":{"real":"real.wlt","gen":"gen.wlt"}},"metrics":["G7"]})");
  auto m = parse_manifest(doc, dir.path());
  ASSERT_EQ(m.videos.size(), 2u);
  EXPECT_EQ(m.videos[0].id, "a");
  EXPECT_EQ(m.videos[1].id, "b");
  EXPECT_EQ(m.camera_pairs.size(), 6u);
  EXPECT_EQ(m.camera_pairs.back(), CameraPair(5, 0));
  EXPECT_TRUE(m.issues.empty());
}

TEST_F(ManifestTest, MissingRealSideIsMissingArtifact) {
  touch("gen.wlt");
  auto doc = Json::parse(R"({"videos":[{"id":"a"}],"dataset":{"G7":{"gen":"gen.wlt"}},"metrics":["G7"]})");
  EXPECT_EQ(code_of([&] { parse_manifest(doc, dir.path()); }), ErrorCode::kMissingArtifact);
  auto lenient = parse_manifest(doc, dir.path(), false);
  ASSERT_EQ(lenient.issues.size(), 1u);
  EXPECT_EQ(lenient.issues[0].metric, "G7");
  EXPECT_FALSE(lenient.satisfied("G7"));
}

TEST_F(ManifestTest, DuplicateVideoIdsAreRejected) {
  auto doc = Json::parse(R"({"videos":[{"id":"a"},{"id":"a"}]})");
  EXPECT_EQ(code_of([&] { parse_manifest(doc, dir.path()); }), ErrorCode::kDanglingReference);
}

TEST_F(ManifestTest, UnknownMetricAndBadJson) {
  EXPECT_EQ(code_of([&] { parse_manifest(Json::parse(R"({"metrics":["G9"]})"), dir.path()); }),
            ErrorCode::kParseError);
  write_text_file(dir / "broken.json", "{not json");
  EXPECT_EQ(code_of([&] { load_manifest(dir / "broken.json"); }), ErrorCode::kParseError);
}

TEST_F(ManifestTest, CameraPairsOutsideRingAreDangling) {
  auto doc = Json::parse(R"({"camera_count":2,"camera_pairs":[[0,2]]})");
  EXPECT_EQ(code_of([&] { parse_manifest(doc, dir.path()); }), ErrorCode::kDanglingReference);
}

TEST_F(ManifestTest, InputOrderDoesNotChangeOutputOrder) {
  auto a = parse_manifest(Json::parse(R"({"videos":[{"id":"x"},{"id":"c"},{"id":"m"}]})"), dir.path());
  auto b = parse_manifest(Json::parse(R"({"videos":[{"id":"m"},{"id":"x"},{"id":"c"}]})"), dir.path());
  ASSERT_EQ(a.videos.size(), b.videos.size());
  for (std::size_t i = 0; i < a.videos.size(); ++i) EXPECT_EQ(a.videos[i].id, b.videos[i].id);
}

TEST_F(ManifestTest, SyntheticCorpusLoadsStrictly) {
  auto path = fixtures::write_corpus(dir / "corpus");
  auto m = load_manifest(path);
  EXPECT_EQ(m.metrics.size(), kMetricCatalog.size());
  EXPECT_EQ(m.classes.objects.size(), 2u);
  EXPECT_DOUBLE_EQ(m.classes.object(0)->threshold, 0.25);
  EXPECT_DOUBLE_EQ(m.classes.object(1)->threshold, 0.50);
}

}  // namespace
