// Copyright 2026 The Projlang Authors.
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

#include "projlang/matching.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace projlang {

namespace {

// O(n^3) Hungarian algorithm with potentials on a square matrix restricted to
// the given rows and columns. Returns the optimal cost and, for each listed
// row, the index into `cols` it is assigned to.
double SolveSquare(const CostMatrix& a, const std::vector<int>& rows,
                   const std::vector<int>& cols, std::vector<int>* assignment) {
  const size_t n = rows.size();
  if (n == 0) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] is the row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<size_t> p(n + 1, 0), way(n + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const size_t i0 = p[j0];
      double delta = inf;
      size_t j1 = 0;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = a(rows[i0 - 1], cols[j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
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
      const size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  if (assignment) assignment->assign(n, -1);
  for (size_t j = 1; j <= n; ++j) {
    total += a(rows[p[j] - 1], cols[j - 1]);
    if (assignment) (*assignment)[p[j] - 1] = static_cast<int>(j - 1);
  }
  return total;
}

}  // namespace

CostMatrix::CostMatrix(size_t rows, size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw MatchingError("cost matrix data size does not match its shape");
  }
}

Matching Hungarian(const CostMatrix& costs) {
  const size_t n = costs.rows(), m = costs.cols();
  if (n == 0 || m == 0) throw MatchingError("empty cost matrix");
  double scale = 0.0;
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < m; ++c) {
      if (!std::isfinite(costs(r, c))) {
        throw MatchingError("non-finite cost at (" + std::to_string(r) + ", " +
                            std::to_string(c) + ")");
      }
      scale = std::max(scale, std::abs(costs(r, c)));
    }
  }
  const size_t size = std::max(n, m);
  CostMatrix padded(size, size, 0.0);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < m; ++c) padded(r, c) = costs(r, c);
  }

  std::vector<int> rows(size), cols(size);
  for (size_t i = 0; i < size; ++i) rows[i] = cols[i] = static_cast<int>(i);
  const double optimum = SolveSquare(padded, rows, cols, nullptr);
  const double tolerance =
      1e-9 * (1.0 + scale * static_cast<double>(size));

  // Fix rows in order, each to the smallest column that still admits an
  // optimal completion. Real columns come before any dummy; dummies are
  // interchangeable, so only the first free one is tried.
  Matching result;
  double committed = 0.0;
  for (size_t r = 0; r < n; ++r) {
    auto row_pos = std::find(rows.begin(), rows.end(), static_cast<int>(r));
    std::vector<int> rest_rows(rows.begin(), row_pos);
    rest_rows.insert(rest_rows.end(), row_pos + 1, rows.end());

    std::vector<int> candidates;
    for (int c : cols) {
      if (static_cast<size_t>(c) < m) candidates.push_back(c);
    }
    for (int c : cols) {
      if (static_cast<size_t>(c) >= m) {
        candidates.push_back(c);
        break;
      }
    }
    int chosen = -1;
    for (int c : candidates) {
      std::vector<int> rest_cols;
      for (int other : cols) {
        if (other != c) rest_cols.push_back(other);
      }
      double total = committed + padded(r, c) +
                     SolveSquare(padded, rest_rows, rest_cols, nullptr);
      if (total <= optimum + tolerance) {
        chosen = c;
        break;
      }
    }
    if (chosen < 0) throw MatchingError("internal error: no optimal column");
    committed += padded(r, chosen);
    rows = std::move(rest_rows);
    cols.erase(std::find(cols.begin(), cols.end(), chosen));
    if (static_cast<size_t>(chosen) < m) {
      result.pairs.emplace_back(static_cast<int>(r), chosen);
    }
  }
  for (auto [r, c] : result.pairs) result.total_cost += costs(r, c);
  return result;
}

ChunkMatch ChunkMatchCost(std::span<const EmbeddingVector> left,
                          std::span<const EmbeddingVector> right) {
  ChunkMatch out;
  const double surplus = static_cast<double>(
      left.size() > right.size() ? left.size() - right.size()
                                 : right.size() - left.size());
  if (left.empty() || right.empty()) {
    out.cost = kUnmatchedChunkPenalty * surplus;
    return out;
  }
  CostMatrix costs(left.size(), right.size());
  for (size_t i = 0; i < left.size(); ++i) {
    for (size_t j = 0; j < right.size(); ++j) {
      costs(i, j) = CosineDistance(left[i], right[j]);
    }
  }
  out.matching = Hungarian(costs);
  out.cost = out.matching.total_cost + kUnmatchedChunkPenalty * surplus;
  return out;
}

ChunkMatch ChunkMatchCost(std::span<const Chunk> left,
                          std::span<const Chunk> right,
                          const EmbeddingProvider& provider) {
  std::vector<EmbeddingVector> lv, rv;
  for (const Chunk& c : left) lv.push_back(provider.Embed(c.tokens));
  for (const Chunk& c : right) rv.push_back(provider.Embed(c.tokens));
  return ChunkMatchCost(lv, rv);
}

}  // namespace projlang
