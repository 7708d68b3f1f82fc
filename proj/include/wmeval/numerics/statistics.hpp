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

#ifndef WMEVAL_NUMERICS_STATISTICS_HPP
#define WMEVAL_NUMERICS_STATISTICS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "wmeval/error.hpp"
#include "wmeval/numerics/matrix.hpp"

namespace wmeval::numerics {

inline double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::kDimMismatch, "vector lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double l2_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::kDimMismatch, "vector lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double na = l2_norm(a), nb = l2_norm(b);
  require(na > 0.0 && nb > 0.0, ErrorCode::kZeroVector, "cosine similarity of a zero vector");
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

inline double mean(std::span<const double> values) {
  require(!values.empty(), ErrorCode::kEmptyInput, "mean of empty sequence");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

// ---------------------------------------------------------------------------
// Gaussian summaries and the Frechet distance

struct GaussianSummary {
  std::vector<double> mean;
  Matrix cov;
  std::size_t sample_count = 0;
};

/// Column mean and unbiased (N-1) covariance of an N x D feature matrix.
inline GaussianSummary summarize_gaussian(const Matrix& features) {
  const std::size_t n = features.rows(), d = features.cols();
  require(n >= 2, ErrorCode::kTooFewSamples, "need at least two samples, got " + std::to_string(n));
  GaussianSummary g;
  g.sample_count = n;
  g.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) g.mean[j] += features(i, j);
  for (double& m : g.mean) m /= static_cast<double>(n);
  g.cov = Matrix(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      double da = features(i, a) - g.mean[a];
      for (std::size_t b = a; b < d; ++b) g.cov(a, b) += da * (features(i, b) - g.mean[b]);
    }
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      g.cov(a, b) /= static_cast<double>(n - 1);
      g.cov(b, a) = g.cov(a, b);
    }
  return g;
}

/// ||mu_x - mu_y||^2 + Tr(S_x + S_y - 2 (S_x^1/2 S_y S_x^1/2)^1/2), clamped at 0.
inline double frechet_distance(const GaussianSummary& x, const GaussianSummary& y) {
  require(x.mean.size() == y.mean.size() && x.cov.rows() == y.cov.rows() &&
              x.cov.rows() == x.mean.size(),
          ErrorCode::kDimMismatch, "gaussian summaries have different dimensions");
  double mean_term = 0.0;
  for (std::size_t i = 0; i < x.mean.size(); ++i) {
    double d = x.mean[i] - y.mean[i];
    mean_term += d * d;
  }
  Matrix root_x = psd_matrix_sqrt(x.cov);
  Matrix inner = symmetrized(root_x * y.cov * root_x);
  Matrix cross = psd_matrix_sqrt(inner);
  double value = mean_term + x.cov.trace() + y.cov.trace() - 2.0 * cross.trace();
  return std::max(0.0, value);
}

// ---------------------------------------------------------------------------
// Jensen-Shannon divergence (base 2, so the result lies in [0, 1])

inline double jsd(std::span<const double> p, std::span<const double> q) {
  require(p.size() == q.size(), ErrorCode::kDimMismatch, "histograms have different bin counts");
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] >= 0.0 && q[i] >= 0.0, ErrorCode::kNegativeMass, "histogram has negative mass");
    sp += p[i];
    sq += q[i];
  }
  require(sp > 0.0 && sq > 0.0, ErrorCode::kZeroMass, "histogram has zero total mass");
  double kl_p = 0.0, kl_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double pi = p[i] / sp, qi = q[i] / sq, mi = 0.5 * (pi + qi);
    if (pi > 0.0) kl_p += pi * std::log2(pi / mi);
    if (qi > 0.0) kl_q += qi * std::log2(qi / mi);
  }
  return std::clamp(0.5 * (kl_p + kl_q), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Temporal statistics over embedding sequences (rows are frames)

struct TemporalProfile {
  double acm = 0.0;  // adjacent-frame cosine mean
  double tji = 0.0;  // temporal jitter index
  double mrs = 1.0;  // motion-rate similarity

  /// ACM / (1 + TJI) * sqrt(MRS)
  double score() const { return acm / (1.0 + tji) * std::sqrt(mrs); }
};

inline constexpr double kTemporalBeta = 0.5;
inline constexpr double kTemporalEps = 1e-8;

inline TemporalProfile temporal_profile(const Matrix& gen, const Matrix& ref,
                                        double beta = kTemporalBeta, double eps = kTemporalEps) {
  require(gen.rows() == ref.rows(), ErrorCode::kLengthMismatch,
          "generated and reference sequences differ in length");
  require(gen.cols() == ref.cols(), ErrorCode::kDimMismatch, "embedding dimensions differ");
  const std::size_t frames = gen.rows();
  require(frames >= 2, ErrorCode::kTooShort, "temporal statistics need at least two frames");

  std::vector<double> step_gen(frames - 1), step_ref(frames - 1);
  double acm = 0.0, log_ratio = 0.0;
  for (std::size_t t = 0; t + 1 < frames; ++t) {
    acm += cosine_similarity(gen.row(t), gen.row(t + 1));
    step_gen[t] = l2_distance(gen.row(t + 1), gen.row(t));
    step_ref[t] = l2_distance(ref.row(t + 1), ref.row(t));
    log_ratio += std::abs(std::log((step_gen[t] + eps) / (step_ref[t] + eps)));
  }
  TemporalProfile out;
  out.acm = acm / static_cast<double>(frames - 1);
  out.mrs = std::exp(-beta * log_ratio / static_cast<double>(frames - 1));

  if (frames >= 3) {
    double jitter = 0.0;
    std::vector<double> second(gen.cols());
    for (std::size_t t = 1; t + 1 < frames; ++t) {
      for (std::size_t k = 0; k < gen.cols(); ++k)
        second[k] = gen(t + 1, k) - 2.0 * gen(t, k) + gen(t - 1, k);
      jitter += l2_norm(second) / (0.5 * (step_gen[t] + step_gen[t - 1]) + eps);
    }
    out.tji = jitter / static_cast<double>(frames - 2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Order statistics

/// Linear interpolation between closest ranks on sorted data: position q*(N-1).
inline double interpolated_quantile(std::span<const double> sorted, double q) {
  require(!sorted.empty(), ErrorCode::kEmptyInput, "quantile of empty sequence");
  double pos = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace wmeval::numerics

#endif  // WMEVAL_NUMERICS_STATISTICS_HPP
