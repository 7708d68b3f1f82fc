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

#ifndef WMEVAL_ERROR_HPP
#define WMEVAL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace wmeval {

enum class ErrorCode {
  // interchange
  kBadMagic,
  kTruncatedPayload,
  kUnknownDtype,
  kShapeOverflow,
  kInvariantViolation,
  kIoFailure,
  kParseError,
  kMissingArtifact,
  kDanglingReference,
  kNormalizationMismatch,
  kLabelOutOfRange,
  // numerics
  kZeroVector,
  kLengthMismatch,
  kTooShort,
  kNotSymmetric,
  kIndefiniteMatrix,
  kDimMismatch,
  kTooFewSamples,
  kEmptyMatrix,
  kNonFiniteCost,
  kNegativeMass,
  kZeroMass,
  kShapeMismatch,
  kTooSmall,
  // metrics
  kEmptyInput,
  kNoUsableTracks,
  kSingleFrame,
  kEmptyMasks,
  kUnknownPair,
  kEmptyMask,
  kNonPositiveGtDepth,
  kUnknownTrajectoryName,
  kEmptyCondition,
  kOutOfRange,
  kZeroRoute,
  kNoGroundTruth,
  kGridMismatch,
  kNoRecords,
  kUnvalidatedRecord,
  // orchestration
  kManifestError,
  kNoMetricsSelected,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kUnknownDtype: return "UnknownDtype";
    case ErrorCode::kShapeOverflow: return "ShapeOverflow";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingArtifact: return "MissingArtifact";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kNormalizationMismatch: return "NormalizationMismatch";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kIndefiniteMatrix: return "IndefiniteMatrix";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kNonFiniteCost: return "NonFiniteCost";
    case ErrorCode::kNegativeMass: return "NegativeMass";
    case ErrorCode::kZeroMass: return "ZeroMass";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNoUsableTracks: return "NoUsableTracks";
    case ErrorCode::kSingleFrame: return "SingleFrame";
    case ErrorCode::kEmptyMasks: return "EmptyMasks";
    case ErrorCode::kUnknownPair: return "UnknownPair";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kNonPositiveGtDepth: return "NonPositiveGtDepth";
    case ErrorCode::kUnknownTrajectoryName: return "UnknownTrajectoryName";
    case ErrorCode::kEmptyCondition: return "EmptyCondition";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kZeroRoute: return "ZeroRoute";
    case ErrorCode::kNoGroundTruth: return "NoGroundTruth";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kNoRecords: return "NoRecords";
    case ErrorCode::kUnvalidatedRecord: return "UnvalidatedRecord";
    case ErrorCode::kManifestError: return "ManifestError";
    case ErrorCode::kNoMetricsSelected: return "NoMetricsSelected";
  }
  return "Unknown";
}

/// Every fallible operation in the library throws this type. The code is
/// stable and machine-checkable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace wmeval

#endif  // WMEVAL_ERROR_HPP
