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

#ifndef WMEVAL_NUMERICS_ASSIGNMENT_HPP
#define WMEVAL_NUMERICS_ASSIGNMENT_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "wmeval/error.hpp"
#include "wmeval/numerics/matrix.hpp"

namespace wmeval::numerics {

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // sorted by row
  double total_cost = 0.0;
};

namespace detail {

inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

// Shortest augmenting path with potentials, O(n^2 m). Requires n <= m.
// Returns the column for every row.
inline std::vector<std::size_t> solve_rows_le_cols(const Matrix& cost) {
  const std::size_t n = cost.rows(), m = cost.cols();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, kUnassigned);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Optimal assignment of size min(n, m); row_to_col[r] == kUnassigned for
// rows left out when n > m.
inline std::vector<std::size_t> solve_rectangular(const Matrix& cost) {
  if (cost.rows() == 0 || cost.cols() == 0) return std::vector<std::size_t>(cost.rows(), kUnassigned);
  if (cost.rows() <= cost.cols()) return solve_rows_le_cols(cost);
  auto col_to_row = solve_rows_le_cols(cost.transposed());
  std::vector<std::size_t> row_to_col(cost.rows(), kUnassigned);
  for (std::size_t c = 0; c < col_to_row.size(); ++c) row_to_col[col_to_row[c]] = c;
  return row_to_col;
}

inline double assignment_cost(const Matrix& cost, const std::vector<std::size_t>& row_to_col) {
  double total = 0.0;
  for (std::size_t r = 0; r < row_to_col.size(); ++r)
    if (row_to_col[r] != kUnassigned) total += cost(r, row_to_col[r]);
  return total;
}

}  // namespace detail

/// Minimum-cost one-to-one assignment of size min(n, m). Among optimal
/// assignments (costs equal within 1e-9 relative) the lexicographically
/// smallest row-sorted pair list is returned.
inline Assignment hungarian_assign(const Matrix& cost) {
  using detail::kUnassigned;
  require(cost.rows() > 0 && cost.cols() > 0, ErrorCode::kEmptyMatrix, "empty cost matrix");
  for (double c : cost.data())
    require(std::isfinite(c), ErrorCode::kNonFiniteCost, "cost matrix has a non-finite entry");

  const std::size_t n = cost.rows(), m = cost.cols();
  std::vector<std::size_t> current = detail::solve_rectangular(cost);
  const double optimum = detail::assignment_cost(cost, current);
  const double tol = 1e-9 * (1.0 + std::abs(optimum));

  std::vector<char> col_used(m, 0);
  double fixed_cost = 0.0;
  std::size_t fixed_pairs = 0;
  const std::size_t target = std::min(n, m);

  // Optimal completion over rows > r and unused columns after tentatively
  // fixing (r, c). Returns nullopt-like empty vector on infeasibility.
  auto try_fix = [&](std::size_t r, std::size_t c, std::vector<std::size_t>& completion) {
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = r + 1; i < n; ++i) rows.push_back(i);
    for (std::size_t j = 0; j < m; ++j)
      if (!col_used[j] && j != c) cols.push_back(j);
    std::size_t need = target - fixed_pairs - 1;
    if (need > std::min(rows.size(), cols.size())) return false;
    if (need != std::min(rows.size(), cols.size())) return false;
    Matrix sub(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) sub(a, b) = cost(rows[a], cols[b]);
    double sub_cost = 0.0;
    std::vector<std::size_t> sub_solution;
    if (need > 0) {
      sub_solution = detail::solve_rectangular(sub);
      sub_cost = detail::assignment_cost(sub, sub_solution);
    }
    if (fixed_cost + cost(r, c) + sub_cost > optimum + tol) return false;
    completion = current;
    completion[r] = c;
    for (std::size_t i = r + 1; i < n; ++i) completion[i] = kUnassigned;
    for (std::size_t a = 0; a < sub_solution.size(); ++a)
      if (sub_solution[a] != kUnassigned) completion[rows[a]] = cols[sub_solution[a]];
    return true;
  };

  for (std::size_t r = 0; r < n && fixed_pairs < target; ++r) {
    std::size_t limit = current[r] == kUnassigned ? m : current[r];
    std::vector<std::size_t> completion;
    for (std::size_t c = 0; c < limit; ++c) {
      if (col_used[c]) continue;
      if (try_fix(r, c, completion)) {
        current = std::move(completion);
        break;
      }
    }
    if (current[r] != kUnassigned) {
      col_used[current[r]] = 1;
      fixed_cost += cost(r, current[r]);
      ++fixed_pairs;
    }
  }

  Assignment out;
  for (std::size_t r = 0; r < n; ++r)
    if (current[r] != kUnassigned) out.pairs.emplace_back(r, current[r]);
  out.total_cost = detail::assignment_cost(cost, current);
  return out;
}

}  // namespace wmeval::numerics

#endif  // WMEVAL_NUMERICS_ASSIGNMENT_HPP
