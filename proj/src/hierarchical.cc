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
#include <limits>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "projlang/projection.h"

namespace projlang {

namespace {

// Upper bound on search iterations; each iteration expands one nonterminal
// per hypothesis, so only pathological depth bounds come near it.
constexpr size_t kMaxSteps = 100000;

struct Hypothesis {
  Derivation derivation;
  std::vector<bool> used_chunks;
  Tokens linear;
  std::string text;  // linear, space-joined
  std::string key;
  double score = 0.0;
};

bool HypothesisLess(const Hypothesis& a, const Hypothesis& b) {
  return std::tie(a.score, a.text, a.key) < std::tie(b.score, b.text, b.key);
}

}  // namespace

HierarchicalProjector::HierarchicalProjector(const Grammar& grammar,
                                             const EmbeddingProvider& provider,
                                             const ChunkLexicon* lexicon)
    : grammar_(grammar), provider_(provider), lexicon_(lexicon) {}

const HierarchicalProjector::NpYields& HierarchicalProjector::YieldsOf(
    SymbolId symbol, std::optional<int> max_depth, size_t& embed_calls) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(symbol, max_depth.value_or(-1));
  auto it = yields_.find(key);
  if (it != yields_.end()) return *it->second;
  auto entry = std::make_unique<NpYields>();
  entry->trees = EnumerateDerivations(grammar_, symbol, max_depth);
  for (const Derivation& d : entry->trees) {
    entry->vectors.push_back(
        provider_.Embed(Linearize(grammar_, d, provider_.mask_token())));
    ++embed_calls;
  }
  return *yields_.emplace(key, std::move(entry)).first->second;
}

ProjectionResult HierarchicalProjector::Project(
    std::span<const std::string> x, const ProjectionConfig& config) const {
  if (x.empty()) throw ProjectionError("empty utterance");
  if (config.beam_width == 0) throw ProjectionError("beam width must be >= 1");
  if (!config.max_depth && grammar_.IsCyclic()) {
    throw ProjectionError("cyclic grammar requires a depth bound");
  }
  ProjectionResult result;
  ProjectionDiagnostics& diag = result.diagnostics;

  const EmbeddingVector query = provider_.Embed(x);
  ++diag.embed_calls;

  std::vector<Chunk> chunks;
  if (lexicon_) chunks = ExtractChunks(x, *lexicon_);
  std::vector<EmbeddingVector> chunk_vectors;  // filled on first use
  const bool align = config.chunk_alignment && !chunks.empty();
  const bool prune = config.np_pruning && lexicon_ && grammar_.has_np();

  // Distances by masked text; identical linearizations embed once.
  std::unordered_map<std::string, double> distance_cache;
  auto score = [&](Hypothesis& h) {
    auto [it, inserted] = distance_cache.try_emplace(h.text, 0.0);
    if (inserted) {
      CosineResult r = CosineDistanceChecked(query, provider_.Embed(h.linear));
      ++diag.embed_calls;
      if (r.zero_norm) ++diag.zero_norm;
      it->second = r.distance;
    }
    h.score = it->second;
    ++diag.candidates_scored;
  };

  // Commits the yield of the np nonterminal at the leftmost site that is
  // closest to some not-yet-used input chunk.
  auto align_np = [&](const Hypothesis& h,
                      SymbolId symbol) -> std::optional<Hypothesis> {
    const NpYields& yields = YieldsOf(symbol, config.max_depth, diag.embed_calls);
    if (yields.trees.empty()) return std::nullopt;
    if (chunk_vectors.empty()) {
      for (const Chunk& c : chunks) {
        chunk_vectors.push_back(provider_.Embed(c.tokens));
        ++diag.embed_calls;
      }
    }
    bool any_free = std::find(h.used_chunks.begin(), h.used_chunks.end(),
                              false) != h.used_chunks.end();
    double best = std::numeric_limits<double>::infinity();
    size_t best_chunk = 0, best_yield = 0;
    for (size_t c = 0; c < chunks.size(); ++c) {
      if (any_free && h.used_chunks[c]) continue;
      for (size_t y = 0; y < yields.trees.size(); ++y) {
        double d = CosineDistance(chunk_vectors[c], yields.vectors[y]);
        if (d < best) {
          best = d;
          best_chunk = c;
          best_yield = y;
        }
      }
    }
    Hypothesis next{h.derivation.Graft(0, yields.trees[best_yield]),
                    h.used_chunks, {}, {}, {}, 0.0};
    next.used_chunks[best_chunk] = true;
    return next;
  };

  Hypothesis start{Derivation::Start(grammar_),
                   std::vector<bool>(chunks.size(), false), {}, {}, {}, 0.0};
  std::vector<Hypothesis> beam;
  beam.push_back(std::move(start));
  std::vector<Hypothesis> finished;
  std::unordered_set<std::string> finished_texts;

  while (!beam.empty()) {
    if (++diag.steps > kMaxSteps) {
      throw ProjectionError("search exceeded step limit", diag);
    }
    std::vector<Hypothesis> candidates;
    std::unordered_set<std::string> seen;
    auto admit = [&](Hypothesis h) {
      if (config.max_depth && h.derivation.Depth() > *config.max_depth) return;
      h.key = FrontierKey(grammar_, h.derivation);
      if (!seen.insert(h.key).second) return;
      h.linear = Linearize(grammar_, h.derivation, provider_.mask_token());
      h.text = JoinTokens(h.linear);
      candidates.push_back(std::move(h));
    };
    for (const Hypothesis& h : beam) {
      const SymbolId symbol = h.derivation.node(h.derivation.frontier()[0]).symbol;
      if (align && grammar_.is_np(symbol)) {
        if (auto next = align_np(h, symbol)) admit(std::move(*next));
        continue;
      }
      for (Derivation& d : Expansions(grammar_, h.derivation, 0)) {
        admit(Hypothesis{std::move(d), h.used_chunks, {}, {}, {}, 0.0});
      }
    }

    if (prune && diag.steps == 1) {
      const int want = static_cast<int>(chunks.size());
      auto keep_end = std::stable_partition(
          candidates.begin(), candidates.end(), [&](const Hypothesis& h) {
            return NpGroupCount(grammar_, h.derivation) == want;
          });
      diag.pruned_hypotheses += candidates.end() - keep_end;
      candidates.erase(keep_end, candidates.end());
      if (candidates.empty()) {
        throw ProjectionError("no derivation matches chunk count", diag);
      }
    }

    for (Hypothesis& h : candidates) score(h);
    const size_t keep = std::min(config.beam_width, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep,
                      candidates.end(), HypothesisLess);
    candidates.erase(candidates.begin() + keep, candidates.end());

    beam.clear();
    for (Hypothesis& h : candidates) {
      if (!h.derivation.complete()) {
        beam.push_back(std::move(h));
      } else if (finished_texts.insert(h.text).second) {
        finished.push_back(std::move(h));
      }
    }
  }

  if (finished.empty()) {
    throw ProjectionError("no complete derivation found", diag);
  }

  std::sort(finished.begin(), finished.end(), HypothesisLess);
  std::vector<SyntheticSentence> sentences;
  std::vector<double> deltas;
  for (Hypothesis& h : finished) {
    sentences.push_back(MakeSentence(grammar_, h.derivation));
    deltas.push_back(h.score);
  }

  std::vector<std::pair<size_t, double>> order;  // (sentence, final score)
  if (config.rescore_with_matching) {
    ChunkLexicon empty;
    for (const RescoredCandidate& r : RescoreDeltaPrime(
             x, sentences, provider_, config.alpha, lexicon_ ? *lexicon_ : empty,
             &grammar_, deltas, &diag.embed_calls)) {
      order.emplace_back(r.index, r.score);
    }
  } else {
    for (size_t i = 0; i < sentences.size(); ++i) order.emplace_back(i, deltas[i]);
  }

  result.chosen = sentences[order[0].first];
  result.chosen_source = order[0].first;
  result.distance = order[0].second;
  for (size_t i = 1; i < order.size() && i <= config.runner_ups; ++i) {
    const SyntheticSentence& s = sentences[order[i].first];
    result.runner_ups.push_back({s.text(), s.program, order[i].second, order[i].first});
  }
  return result;
}

ProjectionResult ProjectHier(std::span<const std::string> x,
                             const Grammar& grammar,
                             const EmbeddingProvider& provider,
                             const ProjectionConfig& config,
                             const ChunkLexicon* lexicon) {
  return HierarchicalProjector(grammar, provider, lexicon).Project(x, config);
}

}  // namespace projlang
