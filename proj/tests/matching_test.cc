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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "projlang/embedding.h"
#include "projlang/matching.h"
#include "test_util.h"

namespace projlang {
namespace {

using Pairs = std::vector<std::pair<int, int>>;

CostMatrix FromRows(const std::vector<std::vector<double>>& rows) {
  CostMatrix m(rows.size(), rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<std::vector<double>> RandomRows(std::mt19937_64& rng, size_t n,
                                            size_t m, bool integral) {
  std::uniform_real_distribution<double> real(0.0, 1.0);
  std::uniform_int_distribution<int> small(0, 3);
  std::vector<std::vector<double>> rows(n, std::vector<double>(m));
  for (auto& row : rows) {
    for (double& x : row) x = integral ? small(rng) : real(rng);
  }
  return rows;
}

// Lexicographically smallest optimal pair list, by enumerating all
// injective maps; costs must be integral so that sums are exact.
Pairs BruteForceLexPairs(const std::vector<std::vector<double>>& a) {
  const size_t n = a.size(), m = a[0].size();
  const size_t k = std::min(n, m);
  double best = std::numeric_limits<double>::infinity();
  Pairs best_pairs;
  std::vector<int> perm(std::max(n, m));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    Pairs pairs;
    for (size_t i = 0; i < k; ++i) {
      if (n <= m) {
        pairs.emplace_back(static_cast<int>(i), perm[i]);
      } else {
        pairs.emplace_back(perm[i], static_cast<int>(i));
      }
    }
    std::sort(pairs.begin(), pairs.end());
    double total = 0;
    for (auto [r, c] : pairs) total += a[r][c];
    if (total < best || (total == best && pairs < best_pairs)) {
      best = total;
      best_pairs = pairs;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best_pairs;
}

TEST_CASE("small examples") {
  Matching zero = Hungarian(FromRows({{0, 1}, {1, 0}}));
  CHECK(zero.pairs == Pairs{{0, 0}, {1, 1}});
  CHECK(zero.total_cost == 0.0);
  Matching two = Hungarian(FromRows({{1, 2}, {3, 1}}));
  CHECK(two.pairs == Pairs{{0, 0}, {1, 1}});
  CHECK(two.total_cost == 2.0);
  Matching cross = Hungarian(FromRows({{5, 1}, {1, 5}}));
  CHECK(cross.pairs == Pairs{{0, 1}, {1, 0}});
  CHECK(cross.total_cost == 2.0);
  // Rectangular.
  Matching wide = Hungarian(FromRows({{4, 1, 3}}));
  CHECK(wide.pairs == Pairs{{0, 1}});
  Matching tall = Hungarian(FromRows({{4}, {1}, {3}}));
  CHECK(tall.pairs == Pairs{{1, 0}});
  CHECK(tall.total_cost == 1.0);
  // Ties resolve to the lexicographically smallest pair list.
  Matching tie = Hungarian(FromRows({{1, 1}, {1, 1}}));
  CHECK(tie.pairs == Pairs{{0, 0}, {1, 1}});
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(Hungarian(CostMatrix(0, 0)), MatchingError);
  CHECK_THROWS_AS(Hungarian(CostMatrix(2, 0)), MatchingError);
  CostMatrix bad(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Hungarian(bad), MatchingError);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Hungarian(bad), MatchingError);
  CHECK_THROWS(CostMatrix(2, 2, std::vector<double>{1, 2, 3}));
}

TEST_CASE("random matrices match the factorial oracle") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<size_t> size(1, 6);
  for (int t = 0; t < 300; ++t) {
    const bool integral = t % 2 == 0;
    auto rows = RandomRows(rng, size(rng), size(rng), integral);
    Matching m = Hungarian(FromRows(rows));
    CAPTURE(t);
    CHECK(m.total_cost == testing::BruteForceAssignment(rows));
    CHECK(m.pairs.size() == std::min(rows.size(), rows[0].size()));
    if (integral) CHECK(m.pairs == BruteForceLexPairs(rows));
  }
}

TEST_CASE("cost is invariant under permutation and shifts by constants") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const size_t n = 1 + rng() % 6;
    auto rows = RandomRows(rng, n, n, true);
    double base = Hungarian(FromRows(rows)).total_cost;
    auto permuted = rows;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    CHECK(Hungarian(FromRows(permuted)).total_cost == base);
    auto shifted = rows;
    for (auto& row : shifted) {
      for (double& x : row) x += 2.0;
    }
    CHECK(Hungarian(FromRows(shifted)).total_cost == base + 2.0 * n);
    std::vector<std::vector<double>> transposed(n, std::vector<double>(n));
    for (size_t r = 0; r < n; ++r) {
      for (size_t c = 0; c < n; ++c) transposed[c][r] = rows[r][c];
    }
    CHECK(Hungarian(FromRows(transposed)).total_cost == base);
  }
}

TEST_CASE("chunk match cost") {
  ReferenceEmbedder e(32, 0);
  auto chunks = [](std::vector<std::string> texts) {
    std::vector<Chunk> out;
    for (auto& t : texts) out.push_back(Chunk{Tokenize(t), 0, 0});
    return out;
  };
  auto same = chunks({"red ball", "yellow door"});
  CHECK(ChunkMatchCost(same, same, e).cost == 0.0);

  auto swapped = chunks({"yellow door", "red ball"});
  ChunkMatch crossed = ChunkMatchCost(same, swapped, e);
  CHECK(crossed.cost == 0.0);
  CHECK(crossed.matching.pairs == Pairs{{0, 1}, {1, 0}});

  std::vector<Chunk> none;
  CHECK(ChunkMatchCost(chunks({"red ball"}), none, e).cost == 1.0);
  CHECK(ChunkMatchCost(none, chunks({"a", "b"}), e).cost ==
        2.0 * kUnmatchedChunkPenalty);
  CHECK(ChunkMatchCost(none, none, e).cost == 0.0);

  auto diff = ChunkMatchCost(chunks({"red ball"}), chunks({"blue box"}), e);
  CHECK(diff.cost > 0.0);
  CHECK(diff.cost <= 2.0);
}

}  // namespace
}  // namespace projlang
