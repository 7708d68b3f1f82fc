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

// WLT binary tensors.
//
// Layout (all integers little-endian):
//   bytes 0..3   magic "WLT1"
//   byte  4      dtype code (1 = f32, 2 = u8, 3 = u16)
//   byte  5      ndim
//   bytes 6..7   reserved, written as zero
//   ndim x u64   shape
//   payload      row-major elements

#ifndef WMEVAL_INTERCHANGE_TENSOR_HPP
#define WMEVAL_INTERCHANGE_TENSOR_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "wmeval/error.hpp"

namespace wmeval {

enum class DType : std::uint8_t { kF32 = 1, kU8 = 2, kU16 = 3 };

inline std::size_t dtype_size(DType dtype) {
  switch (dtype) {
    case DType::kF32: return 4;
    case DType::kU8: return 1;
    case DType::kU16: return 2;
  }
  fail(ErrorCode::kUnknownDtype, "dtype code " + std::to_string(static_cast<int>(dtype)));
}

inline constexpr std::array<char, 4> kWltMagic = {'W', 'L', 'T', '1'};
inline constexpr std::size_t kWltFixedHeader = 8;
inline constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 48;

namespace detail {

template <typename T>
struct DTypeOf;
template <>
struct DTypeOf<float> {
  static constexpr DType value = DType::kF32;
};
template <>
struct DTypeOf<std::uint8_t> {
  static constexpr DType value = DType::kU8;
};
template <>
struct DTypeOf<std::uint16_t> {
  static constexpr DType value = DType::kU16;
};

inline void put_u64_le(std::vector<std::byte>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

inline std::uint64_t get_u64_le(std::span<const std::byte> in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return v;
}

static_assert(std::endian::native == std::endian::little,
              "payload copies assume a little-endian host");

}  // namespace detail

/// A typed, shaped, row-major block of bytes as stored on disk.
struct TensorFile {
  DType dtype = DType::kF32;
  std::vector<std::uint64_t> shape;
  std::vector<std::byte> data;

  std::uint64_t element_count() const {
    std::uint64_t n = 1;
    for (auto d : shape) n *= d;
    return n;
  }

  /// Throws InvariantViolation when shape and payload disagree.
  void check() const {
    require(!shape.empty(), ErrorCode::kInvariantViolation, "tensor shape is empty");
    require(shape.size() <= 255, ErrorCode::kInvariantViolation, "tensor rank exceeds 255");
    std::uint64_t n = 1;
    for (auto d : shape) {
      require(d > 0, ErrorCode::kInvariantViolation, "tensor has a zero-length dimension");
      require(n <= kMaxElements / d, ErrorCode::kShapeOverflow, "element count exceeds 2^48");
      n *= d;
    }
    require(n * dtype_size(dtype) == data.size(), ErrorCode::kInvariantViolation,
            "payload length does not match shape");
  }

  template <typename T>
  std::vector<T> values() const {
    require(dtype == detail::DTypeOf<T>::value, ErrorCode::kInvariantViolation,
            "tensor dtype does not match requested element type");
    std::vector<T> out(data.size() / sizeof(T));
    if (!out.empty()) std::memcpy(out.data(), data.data(), data.size());
    return out;
  }

  /// Element values widened to double regardless of dtype.
  std::vector<double> as_doubles() const {
    std::vector<double> out;
    switch (dtype) {
      case DType::kF32:
        for (float v : values<float>()) out.push_back(v);
        break;
      case DType::kU8:
        for (auto v : values<std::uint8_t>()) out.push_back(v);
        break;
      case DType::kU16:
        for (auto v : values<std::uint16_t>()) out.push_back(v);
        break;
    }
    return out;
  }

  template <typename T>
  static TensorFile from(std::vector<std::uint64_t> shape, std::span<const T> values) {
    TensorFile t;
    t.dtype = detail::DTypeOf<T>::value;
    t.shape = std::move(shape);
    t.data.resize(values.size_bytes());
    if (!values.empty()) std::memcpy(t.data.data(), values.data(), values.size_bytes());
    t.check();
    return t;
  }

  friend bool operator==(const TensorFile&, const TensorFile&) = default;
};

inline std::vector<std::byte> encode_tensor(const TensorFile& t) {
  t.check();
  std::vector<std::byte> out;
  out.reserve(kWltFixedHeader + 8 * t.shape.size() + t.data.size());
  for (char c : kWltMagic) out.push_back(static_cast<std::byte>(c));
  out.push_back(static_cast<std::byte>(t.dtype));
  out.push_back(static_cast<std::byte>(t.shape.size()));
  out.push_back(std::byte{0});
  out.push_back(std::byte{0});
  for (auto d : t.shape) detail::put_u64_le(out, d);
  out.insert(out.end(), t.data.begin(), t.data.end());
  return out;
}

inline TensorFile decode_tensor(std::span<const std::byte> bytes) {
  require(bytes.size() >= kWltFixedHeader, ErrorCode::kTruncatedPayload, "file shorter than header");
  for (std::size_t i = 0; i < 4; ++i) {
    require(static_cast<char>(bytes[i]) == kWltMagic[i], ErrorCode::kBadMagic,
            "missing WLT1 magic");
  }
  TensorFile t;
  auto code = static_cast<std::uint8_t>(bytes[4]);
  require(code >= 1 && code <= 3, ErrorCode::kUnknownDtype, "dtype code " + std::to_string(code));
  t.dtype = static_cast<DType>(code);
  std::size_t ndim = static_cast<std::uint8_t>(bytes[5]);
  require(ndim > 0, ErrorCode::kInvariantViolation, "tensor shape is empty");
  std::size_t offset = kWltFixedHeader;
  require(bytes.size() >= offset + 8 * ndim, ErrorCode::kTruncatedPayload, "shape truncated");
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < ndim; ++i) {
    auto d = detail::get_u64_le(bytes.subspan(offset, 8));
    offset += 8;
    require(d > 0, ErrorCode::kInvariantViolation, "tensor has a zero-length dimension");
    require(n <= kMaxElements / d, ErrorCode::kShapeOverflow, "element count exceeds 2^48");
    n *= d;
    t.shape.push_back(d);
  }
  std::uint64_t payload = n * dtype_size(t.dtype);
  require(bytes.size() - offset >= payload, ErrorCode::kTruncatedPayload,
          "payload has " + std::to_string(bytes.size() - offset) + " bytes, expected " +
              std::to_string(payload));
  require(bytes.size() - offset == payload, ErrorCode::kInvariantViolation,
          "trailing bytes after payload");
  t.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
  return t;
}

inline TensorFile read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto bytes = std::as_bytes(std::span<const char>(raw));
  try {
    return decode_tensor(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

inline void write_tensor(const TensorFile& t, const std::filesystem::path& path) {
  auto bytes = encode_tensor(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIoFailure, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorCode::kIoFailure, "write failed for " + path.string());
}

}  // namespace wmeval

#endif  // WMEVAL_INTERCHANGE_TENSOR_HPP
