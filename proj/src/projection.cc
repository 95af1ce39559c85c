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

#include "projlang/projection.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "projlang/matching.h"

namespace projlang {

namespace {

struct Scored {
  size_t source;
  double distance;
};

Tokens SplitSpaces(const std::string& text) {
  Tokens out;
  size_t i = 0;
  while (i <= text.size()) {
    size_t j = text.find(' ', i);
    if (j == std::string::npos) j = text.size();
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

// Distances from `query` to the listed candidates, best `keep` first under
// (distance, text) order.
template <typename VectorOf, typename TextOf>
std::vector<Scored> RankCandidates(const EmbeddingVector& query,
                                   std::span<const size_t> ids,
                                   VectorOf&& vector_of, TextOf&& text_of,
                                   size_t keep, ProjectionDiagnostics& diag) {
  std::vector<Scored> scored;
  scored.reserve(ids.size());
  for (size_t id : ids) {
    CosineResult r = CosineDistanceChecked(query, vector_of(id));
    if (r.zero_norm) ++diag.zero_norm;
    scored.push_back({id, r.distance});
  }
  diag.candidates_scored += scored.size();
  auto less = [&](const Scored& a, const Scored& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return text_of(a.source) < text_of(b.source);
  };
  keep = std::min(keep, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(), less);
  scored.resize(keep);
  return scored;
}

}  // namespace

std::string_view ModeName(ProjectionMode mode) {
  switch (mode) {
    case ProjectionMode::kFlat:
      return "flat";
    case ProjectionMode::kLsh:
      return "lsh";
    case ProjectionMode::kHier:
      return "hier";
  }
  return "?";
}

ProjectionMode ParseMode(std::string_view name) {
  if (name == "flat") return ProjectionMode::kFlat;
  if (name == "lsh") return ProjectionMode::kLsh;
  if (name == "hier") return ProjectionMode::kHier;
  throw std::invalid_argument("unknown projection mode '" + std::string(name) +
                              "'");
}

EmbeddedCorpus EmbeddedCorpus::Build(std::vector<SyntheticSentence> sentences,
                                     const EmbeddingProvider& provider) {
  EmbeddedCorpus corpus;
  corpus.vectors_.reserve(sentences.size());
  corpus.texts_.reserve(sentences.size());
  for (const SyntheticSentence& s : sentences) {
    corpus.texts_.push_back(s.text());
    try {
      corpus.vectors_.push_back(provider.Embed(s.tokens));
    } catch (const EmbeddingError& e) {
      throw EmbeddingError("while embedding \"" + corpus.texts_.back() +
                           "\": " + e.what());
    }
  }
  corpus.sentences_ = std::move(sentences);
  return corpus;
}

ProjectionResult ProjectFlat(std::span<const std::string> x,
                             const EmbeddedCorpus& corpus,
                             const EmbeddingProvider& provider,
                             size_t runner_ups) {
  if (corpus.size() == 0) throw ProjectionError("empty synthetic set");
  ProjectionResult result;
  auto& diag = result.diagnostics;
  EmbeddingVector query = provider.Embed(x);
  ++diag.embed_calls;
  std::vector<size_t> ids(corpus.size());
  std::iota(ids.begin(), ids.end(), size_t{0});
  std::vector<Scored> ranked = RankCandidates(
      query, ids, [&](size_t i) -> const EmbeddingVector& { return corpus.vectors()[i]; },
      [&](size_t i) -> const std::string& { return corpus.texts()[i]; },
      runner_ups + 1, diag);
  result.chosen = corpus.sentences()[ranked[0].source];
  result.chosen_source = ranked[0].source;
  result.distance = ranked[0].distance;
  for (size_t i = 1; i < ranked.size(); ++i) {
    const SyntheticSentence& s = corpus.sentences()[ranked[i].source];
    result.runner_ups.push_back(
        {corpus.texts()[ranked[i].source], s.program, ranked[i].distance,
         ranked[i].source});
  }
  return result;
}

ProjectionResult ProjectFlat(std::span<const std::string> x,
                             std::span<const SyntheticSentence> synth,
                             const EmbeddingProvider& provider,
                             size_t runner_ups) {
  if (synth.empty()) throw ProjectionError("empty synthetic set");
  EmbeddedCorpus corpus = EmbeddedCorpus::Build(
      std::vector<SyntheticSentence>(synth.begin(), synth.end()), provider);
  ProjectionResult result = ProjectFlat(x, corpus, provider, runner_ups);
  result.diagnostics.embed_calls += synth.size();
  return result;
}

ProjectionResult ProjectLsh(std::span<const std::string> x,
                            const LshIndex& index,
                            const EmbeddingProvider& provider, int radius,
                            size_t runner_ups) {
  if (index.entries().empty()) throw ProjectionError("empty index");
  if (provider.dim() != index.dim()) {
    throw ProjectionError("provider dimension " +
                          std::to_string(provider.dim()) +
                          " does not match index dimension " +
                          std::to_string(index.dim()));
  }
  ProjectionResult result;
  auto& diag = result.diagnostics;
  EmbeddingVector query = provider.Embed(x);
  ++diag.embed_calls;
  const Fingerprint fp = index.FingerprintOf(query);
  radius = std::clamp(radius, 0, index.bits());
  std::vector<int> hits = index.QueryFingerprint(fp, radius);
  while (hits.empty() && radius < index.bits()) {
    ++radius;
    ++diag.radius_escalations;
    hits = index.QueryFingerprint(fp, radius);
  }
  diag.radius_used = radius;
  std::vector<size_t> ids(hits.begin(), hits.end());
  const auto& entries = index.entries();
  std::vector<Scored> ranked = RankCandidates(
      query, ids, [&](size_t i) -> const EmbeddingVector& { return entries[i].vector; },
      [&](size_t i) -> const std::string& { return entries[i].text; },
      runner_ups + 1, diag);
  const IndexEntry& best = entries[ranked[0].source];
  result.chosen.tokens = SplitSpaces(best.text);
  result.chosen.program = best.program;
  result.chosen_source = ranked[0].source;
  result.distance = ranked[0].distance;
  for (size_t i = 1; i < ranked.size(); ++i) {
    const IndexEntry& e = entries[ranked[i].source];
    result.runner_ups.push_back(
        {e.text, e.program, ranked[i].distance, ranked[i].source});
  }
  return result;
}

std::vector<RescoredCandidate> RescoreDeltaPrime(
    std::span<const std::string> x,
    std::span<const SyntheticSentence> candidates,
    const EmbeddingProvider& provider, double alpha,
    const ChunkLexicon& lexicon, const Grammar* grammar,
    std::span<const double> known_deltas, size_t* embed_calls) {
  size_t calls = 0;
  std::unordered_map<std::string, EmbeddingVector> chunk_cache;
  auto embed_chunk = [&](const Chunk& c) -> const EmbeddingVector& {
    auto [it, inserted] = chunk_cache.try_emplace(c.text());
    if (inserted) {
      it->second = provider.Embed(c.tokens);
      ++calls;
    }
    return it->second;
  };

  std::vector<EmbeddingVector> x_chunks;
  for (const Chunk& c : ExtractChunks(x, lexicon)) {
    x_chunks.push_back(embed_chunk(c));
  }
  EmbeddingVector query;
  if (known_deltas.size() != candidates.size()) {
    query = provider.Embed(x);
    ++calls;
  }

  std::vector<RescoredCandidate> out;
  std::vector<std::string> texts;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const SyntheticSentence& s = candidates[i];
    RescoredCandidate r;
    r.index = i;
    if (known_deltas.size() == candidates.size()) {
      r.delta = known_deltas[i];
    } else {
      r.delta = CosineDistance(query, provider.Embed(s.tokens));
      ++calls;
    }
    std::vector<EmbeddingVector> s_chunks;
    for (const Chunk& c : SynthChunks(s, grammar, &lexicon)) {
      s_chunks.push_back(embed_chunk(c));
    }
    r.matching_cost = ChunkMatchCost(x_chunks, s_chunks).cost;
    r.score = r.delta + alpha * r.matching_cost;
    out.push_back(r);
    texts.push_back(s.text());
  }
  std::stable_sort(out.begin(), out.end(),
                   [&](const RescoredCandidate& a, const RescoredCandidate& b) {
                     if (a.score != b.score) return a.score < b.score;
                     return texts[a.index] < texts[b.index];
                   });
  if (embed_calls) *embed_calls += calls;
  return out;
}

}  // namespace projlang
