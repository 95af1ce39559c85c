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

#ifndef PROJLANG_TESTS_TEST_UTIL_H_
#define PROJLANG_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace projlang::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(PROJLANG_DATA_DIR) + "/" + name;
}

inline std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// A random acyclic grammar together with its structure, so the number of
// sentences can be counted without going through the parser or enumerator.
struct RandomGrammar {
  std::string source;
  // children[symbol][rule] = symbols referenced by that rule, in order.
  std::vector<std::vector<std::vector<int>>> children;
};

// Every rule starts with a unique marker token, which makes the yield a
// prefix code of the derivation and keeps the grammar unambiguous.
inline RandomGrammar MakeRandomAcyclicGrammar(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> symbols_dist(2, 6);
  const int symbols = symbols_dist(rng);
  RandomGrammar g;
  g.children.resize(symbols);
  std::ostringstream src;
  int marker = 0;
  for (int s = 0; s < symbols; ++s) {
    std::string name = s == 0 ? "$root" : "$s" + std::to_string(s);
    const int rules = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int r = 0; r < rules; ++r) {
      std::vector<int> kids;
      const int later = symbols - s - 1;
      if (later > 0) {
        const int count = std::uniform_int_distribution<int>(0, 2)(rng);
        for (int k = 0; k < count; ++k) {
          kids.push_back(
              s + 1 + std::uniform_int_distribution<int>(0, later - 1)(rng));
        }
      }
      src << name << " -> w" << marker++;
      std::string sem = "(r" + std::to_string(marker);
      for (size_t k = 0; k < kids.size(); ++k) {
        src << " $s" << kids[k];
        if (rng() % 2) src << " x" << k;
        sem += " $" + std::to_string(k + 1);
      }
      src << " : " << sem << ")\n";
      g.children[s].push_back(kids);
    }
  }
  g.source = src.str();
  return g;
}

// Sum over rules of the product of the children's counts.
inline uint64_t BruteForceCount(const RandomGrammar& g, int symbol = 0) {
  uint64_t total = 0;
  for (const std::vector<int>& kids : g.children[symbol]) {
    uint64_t product = 1;
    for (int k : kids) product *= BruteForceCount(g, k);
    total += product;
  }
  return total;
}

// Minimum assignment cost over all injective row->column maps (or
// column->row when there are more rows), summed in row order.
inline double BruteForceAssignment(const std::vector<std::vector<double>>& a) {
  const size_t n = a.size(), m = a[0].size();
  double best = std::numeric_limits<double>::infinity();
  if (n <= m) {
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double total = 0.0;
      for (size_t i = 0; i < n; ++i) total += a[i][perm[i]];
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // Columns j go to rows perm[j]; sum in row order.
      std::vector<std::pair<int, int>> pairs;
      for (size_t j = 0; j < m; ++j) pairs.emplace_back(perm[j], static_cast<int>(j));
      std::sort(pairs.begin(), pairs.end());
      double total = 0.0;
      for (auto [r, c] : pairs) total += a[r][c];
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return best;
}

}  // namespace projlang::testing

#endif  // PROJLANG_TESTS_TEST_UTIL_H_
