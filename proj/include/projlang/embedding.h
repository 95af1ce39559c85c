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

#ifndef PROJLANG_EMBEDDING_H_
#define PROJLANG_EMBEDDING_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "projlang/tokenize.h"

namespace projlang {

using EmbeddingVector = std::vector<double>;

inline constexpr char kDefaultMaskToken[] = "[MASK]";

class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maps token sequences to fixed-dimension sentence vectors. Implementations
// must be safe to call from several threads.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual size_t dim() const = 0;
  virtual const std::string& mask_token() const = 0;

  // Throws EmbeddingError on empty input or provider failure.
  virtual EmbeddingVector Embed(std::span<const std::string> tokens) const = 0;
};

// word -> class id. Words sharing a class share a vector.
using SynonymLexicon = std::map<std::string, std::string>;

SynonymLexicon ParseSynonyms(std::string_view text);
SynonymLexicon LoadSynonyms(const std::string& path);

// Deterministic stand-in for a pretrained encoder. Every token class gets a
// vector of iid standard normals seeded by (seed, class id); the sentence
// vector is their mean. The mask token contributes a zero vector. Sums run
// over classes in sorted order, so the result depends only on the multiset
// of classes and is bit-identical under permutation or synonym substitution.
class ReferenceEmbedder : public EmbeddingProvider {
 public:
  ReferenceEmbedder(size_t dim, uint64_t seed, SynonymLexicon synonyms = {},
                    std::string mask_token = kDefaultMaskToken);

  size_t dim() const override { return dim_; }
  const std::string& mask_token() const override { return mask_token_; }
  EmbeddingVector Embed(std::span<const std::string> tokens) const override;

  const std::string& ClassOf(const std::string& token) const;

 private:
  const EmbeddingVector& ClassVector(const std::string& cls) const;

  size_t dim_;
  uint64_t seed_;
  SynonymLexicon synonyms_;
  std::string mask_token_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, EmbeddingVector> cache_;
};

// Precomputed vectors keyed by the space-joined token sequence.
//
//   dim 4
//   go to the red ball<TAB>0.1 0.2 0.3 0.4
class FileEmbedder : public EmbeddingProvider {
 public:
  static std::unique_ptr<FileEmbedder> Load(const std::string& path);
  static std::unique_ptr<FileEmbedder> Parse(std::string_view text);

  size_t dim() const override { return dim_; }
  const std::string& mask_token() const override { return mask_token_; }
  EmbeddingVector Embed(std::span<const std::string> tokens) const override;

  size_t size() const { return table_.size(); }

 private:
  FileEmbedder() = default;

  size_t dim_ = 0;
  std::string mask_token_ = kDefaultMaskToken;
  std::unordered_map<std::string, EmbeddingVector> table_;
};

// Client for an external embedding server speaking a line protocol:
//
//   -> HELLO            <- DIM <d>
//   -> EMBED <tokens>   <- OK <v1> ... <vd>   |   ERR <message>
//
// Requests on one connection are serialized.
class ServiceEmbedder : public EmbeddingProvider {
 public:
  // Takes ownership of a connected stream descriptor and performs the
  // handshake.
  explicit ServiceEmbedder(int fd, std::string mask_token = kDefaultMaskToken);
  ~ServiceEmbedder() override;
  ServiceEmbedder(const ServiceEmbedder&) = delete;
  ServiceEmbedder& operator=(const ServiceEmbedder&) = delete;

  // Endpoints: "unix:/path/to.sock", "tcp:host:port" or "host:port".
  static std::unique_ptr<ServiceEmbedder> Connect(const std::string& endpoint);

  size_t dim() const override { return dim_; }
  const std::string& mask_token() const override { return mask_token_; }
  EmbeddingVector Embed(std::span<const std::string> tokens) const override;

 private:
  std::string Request(const std::string& line) const;

  int fd_;
  size_t dim_ = 0;
  std::string mask_token_;
  mutable std::mutex mu_;
  mutable std::string buffer_;
};

// Answers protocol requests on `fd` with `provider` until the peer closes.
// Used by embedding servers and tests.
void ServeEmbeddingConnection(int fd, const EmbeddingProvider& provider);

struct EmbeddingProviderConfig {
  enum class Kind { kReference, kFile, kService };

  Kind kind = Kind::kReference;
  size_t dim = 64;
  uint64_t seed = 0;
  std::string synonyms_path;
  std::string location;  // file path or service endpoint
  std::string mask_token = kDefaultMaskToken;
};

inline constexpr char kEndpointEnvVar[] = "PROJLANG_EMBED_ENDPOINT";

// Parses "reference[:dim=D,seed=S,synonyms=PATH,mask=TOK]", "file:PATH" or
// "service[:ENDPOINT]". The endpoint environment variable overrides the
// service endpoint.
EmbeddingProviderConfig ParseProviderSpec(std::string_view spec,
                                          uint64_t default_seed = 0);

std::unique_ptr<EmbeddingProvider> MakeProvider(
    const EmbeddingProviderConfig& config);

struct CosineResult {
  double distance = 1.0;
  bool zero_norm = false;  // an input had zero norm; distance is 1
};

// 1 - u.v / (|u| |v|), clamped to [0, 2]. Throws EmbeddingError when the
// dimensions differ.
CosineResult CosineDistanceChecked(std::span<const double> u,
                                   std::span<const double> v);

inline double CosineDistance(std::span<const double> u,
                             std::span<const double> v) {
  return CosineDistanceChecked(u, v).distance;
}

}  // namespace projlang

#endif  // PROJLANG_EMBEDDING_H_
