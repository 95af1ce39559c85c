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

#ifndef PROJLANG_MATCHING_H_
#define PROJLANG_MATCHING_H_

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "projlang/chunker.h"
#include "projlang/embedding.h"

namespace projlang {

class MatchingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of assignment costs.
class CostMatrix {
 public:
  CostMatrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(size_t rows, size_t cols, std::vector<double> data);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }

 private:
  size_t rows_;
  size_t cols_;
  std::vector<double> data_;
};

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (row, col), ascending by row
  double total_cost = 0.0;                 // row-order sum of matched entries
};

// Minimum-cost assignment of min(rows, cols) pairs. Rectangular inputs are
// padded with zero-cost dummies. Among optimal matchings the lexicographically
// smallest pair list is returned. Throws MatchingError for empty or
// non-finite input.
Matching Hungarian(const CostMatrix& costs);

// Cost charged per chunk left unmatched when the two sides differ in size.
inline constexpr double kUnmatchedChunkPenalty = 1.0;

struct ChunkMatch {
  double cost = 0.0;
  Matching matching;
};

// Hungarian matching between two chunk lists under cosine distance of the
// chunk embeddings, plus kUnmatchedChunkPenalty per surplus chunk.
ChunkMatch ChunkMatchCost(std::span<const Chunk> left,
                          std::span<const Chunk> right,
                          const EmbeddingProvider& provider);

// Same, with the chunk embeddings already computed.
ChunkMatch ChunkMatchCost(std::span<const EmbeddingVector> left,
                          std::span<const EmbeddingVector> right);

}  // namespace projlang

#endif  // PROJLANG_MATCHING_H_
