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

#include "projlang/embedding.h"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "projlang/random.h"

namespace projlang {

namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EmbeddingError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double ParseReal(std::string_view s, int line) {
  std::string owned(s);
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(owned.c_str(), &end);
  if (end != owned.c_str() + owned.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw EmbeddingError("line " + std::to_string(line) + ": bad number '" +
                         owned + "'");
  }
  return v;
}

}  // namespace

SynonymLexicon ParseSynonyms(std::string_view text) {
  SynonymLexicon lexicon;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto words = SplitWhitespace(line);
    if (words.empty() || words[0].front() == '#') continue;
    if (words.size() != 2) {
      throw EmbeddingError("synonyms line " + std::to_string(line_no) +
                           ": expected '<word> <class>'");
    }
    Tokens word = Tokenize(words[0]);
    Tokens cls = Tokenize(words[1]);
    if (word.size() != 1 || cls.size() != 1) {
      throw EmbeddingError("synonyms line " + std::to_string(line_no) +
                           ": entries must be single tokens");
    }
    lexicon[word[0]] = cls[0];
  }
  return lexicon;
}

SynonymLexicon LoadSynonyms(const std::string& path) {
  return ParseSynonyms(ReadFile(path));
}

ReferenceEmbedder::ReferenceEmbedder(size_t dim, uint64_t seed,
                                     SynonymLexicon synonyms,
                                     std::string mask_token)
    : dim_(dim),
      seed_(seed),
      synonyms_(std::move(synonyms)),
      mask_token_(std::move(mask_token)) {
  if (dim_ == 0) throw EmbeddingError("embedding dimension must be >= 1");
}

const std::string& ReferenceEmbedder::ClassOf(const std::string& token) const {
  auto it = synonyms_.find(token);
  return it == synonyms_.end() ? token : it->second;
}

const EmbeddingVector& ReferenceEmbedder::ClassVector(
    const std::string& cls) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(cls);
  if (it != cache_.end()) return it->second;
  NormalSampler sampler(MixSeed(seed_, Fnv1a64(cls)));
  EmbeddingVector v(dim_);
  for (double& x : v) x = sampler.Next();
  return cache_.emplace(cls, std::move(v)).first->second;
}

EmbeddingVector ReferenceEmbedder::Embed(
    std::span<const std::string> tokens) const {
  if (tokens.empty()) throw EmbeddingError("cannot embed an empty sequence");
  std::vector<const std::string*> classes;
  classes.reserve(tokens.size());
  for (const std::string& t : tokens) {
    if (t != mask_token_) classes.push_back(&ClassOf(t));
  }
  std::sort(classes.begin(), classes.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  EmbeddingVector sum(dim_, 0.0);
  for (const std::string* cls : classes) {
    const EmbeddingVector& v = ClassVector(*cls);
    for (size_t i = 0; i < dim_; ++i) sum[i] += v[i];
  }
  const double n = static_cast<double>(tokens.size());
  for (double& x : sum) x /= n;
  return sum;
}

std::unique_ptr<FileEmbedder> FileEmbedder::Load(const std::string& path) {
  return Parse(ReadFile(path));
}

std::unique_ptr<FileEmbedder> FileEmbedder::Parse(std::string_view text) {
  std::unique_ptr<FileEmbedder> out(new FileEmbedder());
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_dim = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (SplitWhitespace(line).empty()) continue;
    if (!have_dim) {
      auto words = SplitWhitespace(line);
      size_t d = 0;
      if (words.size() != 2 || words[0] != "dim" ||
          std::from_chars(words[1].data(), words[1].data() + words[1].size(), d)
                  .ec != std::errc() ||
          d == 0) {
        throw EmbeddingError("line " + std::to_string(line_no) +
                             ": expected header 'dim <d>'");
      }
      out->dim_ = d;
      have_dim = true;
      continue;
    }
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw EmbeddingError("line " + std::to_string(line_no) +
                           ": malformed entry, expected '<tokens>\\t<values>'");
    }
    auto key_words = SplitWhitespace(std::string_view(line).substr(0, tab));
    if (key_words.empty()) {
      throw EmbeddingError("line " + std::to_string(line_no) + ": empty key");
    }
    std::string key;
    for (auto w : key_words) {
      if (!key.empty()) key.push_back(' ');
      key += w;
    }
    EmbeddingVector v;
    for (auto w : SplitWhitespace(std::string_view(line).substr(tab + 1))) {
      v.push_back(ParseReal(w, line_no));
    }
    if (v.size() != out->dim_) {
      throw EmbeddingError("line " + std::to_string(line_no) +
                           ": inconsistent dimension " +
                           std::to_string(v.size()) + ", expected " +
                           std::to_string(out->dim_));
    }
    out->table_[key] = std::move(v);
  }
  if (!have_dim) throw EmbeddingError("missing 'dim <d>' header");
  return out;
}

EmbeddingVector FileEmbedder::Embed(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw EmbeddingError("cannot embed an empty sequence");
  std::string key = JoinTokens(tokens);
  auto it = table_.find(key);
  if (it == table_.end()) throw EmbeddingError("no embedding for: " + key);
  return it->second;
}

EmbeddingProviderConfig ParseProviderSpec(std::string_view spec,
                                          uint64_t default_seed) {
  EmbeddingProviderConfig config;
  config.seed = default_seed;
  std::string_view kind = spec.substr(0, spec.find(':'));
  std::string_view rest =
      kind.size() < spec.size() ? spec.substr(kind.size() + 1) : "";
  if (kind == "reference") {
    config.kind = EmbeddingProviderConfig::Kind::kReference;
    while (!rest.empty()) {
      std::string_view item = rest.substr(0, rest.find(','));
      rest = item.size() < rest.size() ? rest.substr(item.size() + 1) : "";
      size_t eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw EmbeddingError("bad reference option '" + std::string(item) +
                             "'");
      }
      std::string key(item.substr(0, eq));
      std::string value(item.substr(eq + 1));
      auto parse_uint = [&](auto& out) {
        auto r = std::from_chars(value.data(), value.data() + value.size(), out);
        if (r.ec != std::errc() || r.ptr != value.data() + value.size()) {
          throw EmbeddingError("bad value for " + key + ": " + value);
        }
      };
      if (key == "dim") {
        parse_uint(config.dim);
      } else if (key == "seed") {
        parse_uint(config.seed);
      } else if (key == "synonyms") {
        config.synonyms_path = value;
      } else if (key == "mask") {
        config.mask_token = value;
      } else {
        throw EmbeddingError("unknown reference option '" + key + "'");
      }
    }
    if (config.dim == 0) throw EmbeddingError("dim must be >= 1");
  } else if (kind == "file") {
    config.kind = EmbeddingProviderConfig::Kind::kFile;
    config.location = std::string(rest);
    if (config.location.empty()) throw EmbeddingError("file: needs a path");
  } else if (kind == "service") {
    config.kind = EmbeddingProviderConfig::Kind::kService;
    config.location = std::string(rest);
    if (const char* env = std::getenv(kEndpointEnvVar); env && *env) {
      config.location = env;
    }
    if (config.location.empty()) {
      throw EmbeddingError("service: needs an endpoint or " +
                           std::string(kEndpointEnvVar));
    }
  } else {
    throw EmbeddingError("unknown embedding kind '" + std::string(kind) + "'");
  }
  return config;
}

std::unique_ptr<EmbeddingProvider> MakeProvider(
    const EmbeddingProviderConfig& config) {
  switch (config.kind) {
    case EmbeddingProviderConfig::Kind::kReference: {
      SynonymLexicon synonyms;
      if (!config.synonyms_path.empty()) {
        synonyms = LoadSynonyms(config.synonyms_path);
      }
      return std::make_unique<ReferenceEmbedder>(
          config.dim, config.seed, std::move(synonyms), config.mask_token);
    }
    case EmbeddingProviderConfig::Kind::kFile:
      return FileEmbedder::Load(config.location);
    case EmbeddingProviderConfig::Kind::kService:
      return ServiceEmbedder::Connect(config.location);
  }
  throw EmbeddingError("unreachable provider kind");
}

CosineResult CosineDistanceChecked(std::span<const double> u,
                                   std::span<const double> v) {
  if (u.size() != v.size()) {
    throw EmbeddingError("dimension mismatch: " + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return {1.0, true};
  // sqrt(uu * vv) rather than sqrt(uu) * sqrt(vv): for u == v this is exactly
  // uu, so self-distance is exactly zero.
  double d = 1.0 - dot / std::sqrt(uu * vv);
  return {std::clamp(d, 0.0, 2.0), false};
}

}  // namespace projlang
