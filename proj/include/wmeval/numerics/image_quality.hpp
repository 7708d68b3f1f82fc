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

#ifndef WMEVAL_NUMERICS_IMAGE_QUALITY_HPP
#define WMEVAL_NUMERICS_IMAGE_QUALITY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wmeval/error.hpp"

namespace wmeval::numerics {

/// H x W x C image, interleaved channels, values nominally in [0, 1].
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t h, std::size_t w, std::size_t ch = 1, double fill = 0.0)
      : height(h), width(w), channels(ch), pixels(h * w * ch, fill) {}

  double at(std::size_t r, std::size_t c, std::size_t ch = 0) const {
    return pixels[(r * width + c) * channels + ch];
  }
  double& at(std::size_t r, std::size_t c, std::size_t ch = 0) { return pixels[(r * width + c) * channels + ch]; }

  Image channel(std::size_t ch) const {
    Image out(height, width, 1);
    for (std::size_t i = 0; i < height * width; ++i) out.pixels[i] = pixels[i * channels + ch];
    return out;
  }

  bool same_shape(const Image& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
};

inline constexpr double kPsnrCapDb = 100.0;

/// 10 log10(peak^2 / MSE); identical inputs return the 100 dB cap.
inline double psnr(const Image& a, const Image& b, double peak = 1.0) {
  require(a.same_shape(b), ErrorCode::kShapeMismatch, "psnr inputs differ in shape");
  require(peak > 0.0, ErrorCode::kOutOfRange, "psnr peak must be positive");
  require(!a.pixels.empty(), ErrorCode::kShapeMismatch, "psnr of empty image");
  double sse = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    double d = a.pixels[i] - b.pixels[i];
    sse += d * d;
  }
  double mse = sse / static_cast<double>(a.pixels.size());
  if (mse == 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(peak * peak / mse));
}

inline constexpr std::size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

/// Normalized 1-D Gaussian taps; the 2-D window is their outer product.
inline std::array<double, kSsimWindow> ssim_gaussian_taps() {
  std::array<double, kSsimWindow> taps{};
  double sum = 0.0;
  const double center = (kSsimWindow - 1) / 2.0;
  for (std::size_t i = 0; i < kSsimWindow; ++i) {
    double x = static_cast<double>(i) - center;
    taps[i] = std::exp(-(x * x) / (2.0 * kSsimSigma * kSsimSigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

namespace detail {

// Separable "valid" Gaussian filtering of a single-channel image.
inline std::vector<double> gaussian_valid(const std::vector<double>& src, std::size_t h, std::size_t w) {
  static const auto taps = ssim_gaussian_taps();
  const std::size_t oh = h - kSsimWindow + 1, ow = w - kSsimWindow + 1;
  std::vector<double> horiz(h * ow, 0.0);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < ow; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < kSsimWindow; ++k) s += taps[k] * src[r * w + c + k];
      horiz[r * ow + c] = s;
    }
  std::vector<double> out(oh * ow, 0.0);
  for (std::size_t r = 0; r < oh; ++r)
    for (std::size_t c = 0; c < ow; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < kSsimWindow; ++k) s += taps[k] * horiz[(r + k) * ow + c];
      out[r * ow + c] = s;
    }
  return out;
}

}  // namespace detail

/// Mean local SSIM over all fully-contained 11x11 Gaussian windows
/// (sigma 1.5, K1 0.01, K2 0.03, dynamic range 1).
inline double ssim(const Image& a, const Image& b) {
  require(a.same_shape(b), ErrorCode::kShapeMismatch, "ssim inputs differ in shape");
  require(a.channels == 1, ErrorCode::kShapeMismatch, "ssim expects a single channel");
  require(a.height >= kSsimWindow && a.width >= kSsimWindow, ErrorCode::kTooSmall,
          "ssim needs at least 11x11 pixels");
  const std::size_t h = a.height, w = a.width, n = h * w;
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = a.pixels[i] * a.pixels[i];
    bb[i] = b.pixels[i] * b.pixels[i];
    ab[i] = a.pixels[i] * b.pixels[i];
  }
  auto mu_a = detail::gaussian_valid(a.pixels, h, w);
  auto mu_b = detail::gaussian_valid(b.pixels, h, w);
  auto e_aa = detail::gaussian_valid(aa, h, w);
  auto e_bb = detail::gaussian_valid(bb, h, w);
  auto e_ab = detail::gaussian_valid(ab, h, w);
  const double c1 = kSsimK1 * kSsimK1, c2 = kSsimK2 * kSsimK2;
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    double va = e_aa[i] - mu_a[i] * mu_a[i];
    double vb = e_bb[i] - mu_b[i] * mu_b[i];
    double cov = e_ab[i] - mu_a[i] * mu_b[i];
    double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
    double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

/// Channel-averaged SSIM for multi-channel images.
inline double ssim_multichannel(const Image& a, const Image& b) {
  require(a.same_shape(b), ErrorCode::kShapeMismatch, "ssim inputs differ in shape");
  if (a.channels == 1) return ssim(a, b);
  double total = 0.0;
  for (std::size_t ch = 0; ch < a.channels; ++ch) total += ssim(a.channel(ch), b.channel(ch));
  return total / static_cast<double>(a.channels);
}

}  // namespace wmeval::numerics

#endif  // WMEVAL_NUMERICS_IMAGE_QUALITY_HPP
