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

#ifndef WMEVAL_NUMERICS_MORPHOLOGY_HPP
#define WMEVAL_NUMERICS_MORPHOLOGY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wmeval/error.hpp"

namespace wmeval::numerics {

/// Binary H x W raster, row-major, one byte per pixel (0 or 1).
struct BinaryMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(std::size_t h, std::size_t w, std::uint8_t fill = 0) : height(h), width(w), bits(h * w, fill) {}

  std::uint8_t at(std::size_t r, std::size_t c) const { return bits[r * width + c]; }
  std::uint8_t& at(std::size_t r, std::size_t c) { return bits[r * width + c]; }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b != 0;
    return n;
  }
  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

/// Erosion by the 4-connected cross, applied `radius` times. Pixels outside
/// the raster count as unset, so border pixels never survive radius >= 1.
inline BinaryMask binary_erode(const BinaryMask& mask, int radius) {
  require(radius >= 0, ErrorCode::kOutOfRange, "erosion radius must be non-negative");
  BinaryMask cur = mask;
  const std::size_t h = mask.height, w = mask.width;
  for (int step = 0; step < radius; ++step) {
    BinaryMask next(h, w);
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c) {
        if (!cur.at(r, c)) continue;
        bool keep = r > 0 && r + 1 < h && c > 0 && c + 1 < w && cur.at(r - 1, c) && cur.at(r + 1, c) &&
                    cur.at(r, c - 1) && cur.at(r, c + 1);
        next.at(r, c) = keep ? 1 : 0;
      }
    cur = std::move(next);
  }
  return cur;
}

/// A connected region as sorted flat pixel indices (r * W + c).
using Region = std::vector<std::size_t>;

/// 4-connected components of {labels == class_id}, ordered by their first
/// pixel in raster order (i.e. by (min row, min col of that row)).
inline std::vector<Region> connected_components(std::span<const std::uint16_t> labels, std::size_t height,
                                                std::size_t width, std::uint16_t class_id) {
  require(labels.size() == height * width, ErrorCode::kShapeMismatch, "label raster size");
  std::vector<char> seen(labels.size(), 0);
  std::vector<Region> regions;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < labels.size(); ++start) {
    if (seen[start] || labels[start] != class_id) continue;
    Region region;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      std::size_t p = stack.back();
      stack.pop_back();
      region.push_back(p);
      std::size_t r = p / width, c = p % width;
      auto visit = [&](std::size_t q) {
        if (!seen[q] && labels[q] == class_id) {
          seen[q] = 1;
          stack.push_back(q);
        }
      };
      if (r > 0) visit(p - width);
      if (r + 1 < height) visit(p + width);
      if (c > 0) visit(p - 1);
      if (c + 1 < width) visit(p + 1);
    }
    std::sort(region.begin(), region.end());
    regions.push_back(std::move(region));
  }
  return regions;
}

/// |a ∩ b| / |a ∪ b| for sorted pixel lists.
inline double region_iou(const Region& a, const Region& b) {
  std::size_t i = 0, j = 0, inter = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace wmeval::numerics

#endif  // WMEVAL_NUMERICS_MORPHOLOGY_HPP
