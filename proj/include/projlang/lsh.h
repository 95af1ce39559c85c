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

#ifndef PROJLANG_LSH_H_
#define PROJLANG_LSH_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "projlang/derivation.h"
#include "projlang/embedding.h"

namespace projlang {

// Fingerprints are packed into the low `bits` bits; bit i is hyperplane i.
using Fingerprint = uint64_t;

inline constexpr int kMaxFingerprintBits = 64;
inline constexpr int kDefaultFingerprintBits = 16;
inline constexpr int kDefaultProbeRadius = 2;
inline constexpr int kIndexVersion = 1;

class IndexError : public std::runtime_error {
 public:
  enum class Kind { kVersion, kChecksum, kFormat, kDimension };

  IndexError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct IndexEntry {
  int id = 0;
  std::string text;
  std::string program;
  EmbeddingVector vector;
};

// SimHash index. Hyperplanes are regenerated from (seed, bits, dim), so only
// the seed is stored. Immutable after construction.
class LshIndex {
 public:
  LshIndex(int bits, uint64_t seed, size_t dim);

  // Embeds every sentence once; entry ids follow input order.
  static LshIndex Build(std::span<const SyntheticSentence> sentences,
                        const EmbeddingProvider& provider,
                        int bits = kDefaultFingerprintBits, uint64_t seed = 0);

  // Builds directly from precomputed vectors.
  static LshIndex FromEntries(std::vector<IndexEntry> entries, int bits,
                              uint64_t seed);

  int bits() const { return bits_; }
  uint64_t seed() const { return seed_; }
  size_t dim() const { return dim_; }
  const std::vector<IndexEntry>& entries() const { return entries_; }
  const std::map<Fingerprint, std::vector<int>>& buckets() const {
    return buckets_;
  }

  Fingerprint FingerprintOf(std::span<const double> v) const;

  // Ids in every bucket within Hamming distance `radius` of the query's
  // fingerprint, ascending.
  std::vector<int> Query(std::span<const double> v, int radius) const;
  std::vector<int> QueryFingerprint(Fingerprint fp, int radius) const;

  void Write(std::ostream& out) const;
  static LshIndex Read(std::istream& in);
  void Save(const std::string& path) const;
  static LshIndex Load(const std::string& path);

 private:
  void Insert(IndexEntry entry);

  int bits_;
  uint64_t seed_;
  size_t dim_;
  std::vector<double> hyperplanes_;  // bits x dim, row-major
  std::vector<IndexEntry> entries_;
  std::map<Fingerprint, std::vector<int>> buckets_;
};

int HammingDistance(Fingerprint a, Fingerprint b);

}  // namespace projlang

#endif  // PROJLANG_LSH_H_
