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

#include "projlang/lsh.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "projlang/random.h"

namespace projlang {

namespace {

// Domain separator so hyperplanes never share a stream with token vectors.
constexpr uint64_t kHyperplaneStream = 0x73696d68617368ULL;  // "simhash"

std::string Hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

uint64_t ProbeCount(int bits, int radius) {
  uint64_t total = 0, choose = 1;
  for (int i = 0; i <= radius && i <= bits; ++i) {
    total += choose;
    if (total > (uint64_t{1} << 62)) return total;
    choose = choose * static_cast<uint64_t>(bits - i) / static_cast<uint64_t>(i + 1);
  }
  return total;
}

}  // namespace

int HammingDistance(Fingerprint a, Fingerprint b) {
  return std::popcount(a ^ b);
}

LshIndex::LshIndex(int bits, uint64_t seed, size_t dim)
    : bits_(bits), seed_(seed), dim_(dim) {
  if (bits < 0 || bits > kMaxFingerprintBits) {
    throw IndexError(IndexError::Kind::kFormat,
                     "fingerprint bits must be in [0, 64]");
  }
  if (dim == 0) {
    throw IndexError(IndexError::Kind::kDimension, "dimension must be >= 1");
  }
  NormalSampler sampler(MixSeed(seed, kHyperplaneStream));
  hyperplanes_.resize(static_cast<size_t>(bits) * dim);
  for (double& x : hyperplanes_) x = sampler.Next();
}

LshIndex LshIndex::Build(std::span<const SyntheticSentence> sentences,
                         const EmbeddingProvider& provider, int bits,
                         uint64_t seed) {
  if (sentences.empty()) {
    throw IndexError(IndexError::Kind::kFormat, "cannot index an empty set");
  }
  LshIndex index(bits, seed, provider.dim());
  for (size_t i = 0; i < sentences.size(); ++i) {
    const SyntheticSentence& s = sentences[i];
    EmbeddingVector v;
    try {
      v = provider.Embed(s.tokens);
    } catch (const EmbeddingError& e) {
      throw EmbeddingError("while indexing \"" + s.text() + "\": " + e.what());
    }
    index.Insert({static_cast<int>(i), s.text(), s.program, std::move(v)});
  }
  return index;
}

LshIndex LshIndex::FromEntries(std::vector<IndexEntry> entries, int bits,
                               uint64_t seed) {
  if (entries.empty()) {
    throw IndexError(IndexError::Kind::kFormat, "cannot index an empty set");
  }
  LshIndex index(bits, seed, entries.front().vector.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    entries[i].id = static_cast<int>(i);
    index.Insert(std::move(entries[i]));
  }
  return index;
}

void LshIndex::Insert(IndexEntry entry) {
  if (entry.vector.size() != dim_) {
    throw IndexError(IndexError::Kind::kDimension,
                     "entry \"" + entry.text + "\" has dimension " +
                         std::to_string(entry.vector.size()) + ", index has " +
                         std::to_string(dim_));
  }
  buckets_[FingerprintOf(entry.vector)].push_back(entry.id);
  entries_.push_back(std::move(entry));
}

Fingerprint LshIndex::FingerprintOf(std::span<const double> v) const {
  if (v.size() != dim_) {
    throw IndexError(IndexError::Kind::kDimension,
                     "query dimension " + std::to_string(v.size()) +
                         " does not match index dimension " +
                         std::to_string(dim_));
  }
  Fingerprint fp = 0;
  for (int b = 0; b < bits_; ++b) {
    const double* plane = hyperplanes_.data() + static_cast<size_t>(b) * dim_;
    double dot = 0.0;
    for (size_t i = 0; i < dim_; ++i) dot += plane[i] * v[i];
    if (dot >= 0.0) fp |= Fingerprint{1} << b;
  }
  return fp;
}

std::vector<int> LshIndex::Query(std::span<const double> v, int radius) const {
  return QueryFingerprint(FingerprintOf(v), radius);
}

std::vector<int> LshIndex::QueryFingerprint(Fingerprint fp, int radius) const {
  radius = std::clamp(radius, 0, bits_);
  std::vector<int> ids;
  auto take = [&](const std::vector<int>& bucket) {
    ids.insert(ids.end(), bucket.begin(), bucket.end());
  };
  if (ProbeCount(bits_, radius) <= buckets_.size()) {
    // Enumerate the Hamming ball by flipping up to `radius` distinct bits.
    auto probe = [&](auto&& self, Fingerprint key, int next_bit,
                     int flips_left) -> void {
      if (auto it = buckets_.find(key); it != buckets_.end()) take(it->second);
      if (flips_left == 0) return;
      for (int b = next_bit; b < bits_; ++b) {
        self(self, key ^ (Fingerprint{1} << b), b + 1, flips_left - 1);
      }
    };
    probe(probe, fp, 0, radius);
  } else {
    for (const auto& [key, bucket] : buckets_) {
      if (HammingDistance(key, fp) <= radius) take(bucket);
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void LshIndex::Write(std::ostream& out) const {
  std::string body;
  for (const IndexEntry& e : entries_) {
    nlohmann::ordered_json record;
    record["id"] = e.id;
    record["text"] = e.text;
    record["program"] = e.program;
    record["vector"] = e.vector;
    body += record.dump();
    body.push_back('\n');
  }
  nlohmann::ordered_json header;
  header["format"] = "projlang-lsh";
  header["version"] = kIndexVersion;
  header["bits"] = bits_;
  header["seed"] = seed_;
  header["dim"] = dim_;
  header["count"] = entries_.size();
  header["checksum"] = Hex64(Fnv1a64(body));
  out << header.dump() << '\n' << body;
}

LshIndex LshIndex::Read(std::istream& in) {
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw IndexError(IndexError::Kind::kFormat, "empty index file");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::exception& e) {
    throw IndexError(IndexError::Kind::kFormat,
                     std::string("bad index header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("version")) {
    throw IndexError(IndexError::Kind::kFormat, "index header has no version");
  }
  if (header["version"] != kIndexVersion) {
    throw IndexError(IndexError::Kind::kVersion,
                     "unsupported index version " + header["version"].dump());
  }
  std::string body{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  try {
    if (Hex64(Fnv1a64(body)) != header.at("checksum").get<std::string>()) {
      throw IndexError(IndexError::Kind::kChecksum,
                       "index checksum mismatch (corrupted or truncated)");
    }
    LshIndex index(header.at("bits").get<int>(),
                   header.at("seed").get<uint64_t>(),
                   header.at("dim").get<size_t>());
    std::istringstream lines(body);
    std::string line;
    while (std::getline(lines, line)) {
      nlohmann::json record = nlohmann::json::parse(line);
      IndexEntry e;
      e.id = record.at("id").get<int>();
      e.text = record.at("text").get<std::string>();
      e.program = record.at("program").get<std::string>();
      e.vector = record.at("vector").get<EmbeddingVector>();
      if (e.id != static_cast<int>(index.entries_.size())) {
        throw IndexError(IndexError::Kind::kFormat, "entry ids out of order");
      }
      index.Insert(std::move(e));
    }
    if (index.entries_.size() != header.at("count").get<size_t>()) {
      throw IndexError(IndexError::Kind::kChecksum,
                       "index entry count does not match header");
    }
    return index;
  } catch (const nlohmann::json::exception& e) {
    throw IndexError(IndexError::Kind::kFormat,
                     std::string("malformed index: ") + e.what());
  }
}

void LshIndex::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IndexError(IndexError::Kind::kFormat, "cannot write " + path);
  Write(out);
}

LshIndex LshIndex::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IndexError(IndexError::Kind::kFormat, "cannot open " + path);
  return Read(in);
}

}  // namespace projlang
