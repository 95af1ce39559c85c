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

#include "projlang/projection.h"

namespace projlang {

Interpreter::Interpreter(const Artifacts& artifacts,
                         const ProjectionConfig& config)
    : artifacts_(artifacts), config_(config) {
  if (!artifacts_.provider) throw ProjectionError("no embedding provider");
  const EmbeddingProvider& provider = *artifacts_.provider;
  switch (config_.mode) {
    case ProjectionMode::kFlat:
      if (!artifacts_.corpus) {
        if (!artifacts_.grammar) {
          throw ProjectionError("flat mode needs synthetic data or a grammar");
        }
        owned_corpus_ = std::make_unique<EmbeddedCorpus>(EmbeddedCorpus::Build(
            Enumerate(*artifacts_.grammar, config_.max_depth), provider));
        artifacts_.corpus = owned_corpus_.get();
      }
      break;
    case ProjectionMode::kLsh:
      if (!artifacts_.index) throw ProjectionError("lsh mode needs an index");
      if (artifacts_.index->dim() != provider.dim()) {
        throw ProjectionError("index dimension " +
                              std::to_string(artifacts_.index->dim()) +
                              " does not match provider dimension " +
                              std::to_string(provider.dim()));
      }
      break;
    case ProjectionMode::kHier:
      if (!artifacts_.grammar) throw ProjectionError("hier mode needs a grammar");
      break;
  }
  if (!artifacts_.lexicon && artifacts_.grammar && artifacts_.grammar->has_np()) {
    owned_lexicon_ = std::make_unique<ChunkLexicon>(
        SeedLexiconFromGrammar(*artifacts_.grammar, config_.max_depth));
    artifacts_.lexicon = owned_lexicon_.get();
  }
  if (config_.mode == ProjectionMode::kHier) {
    hier_ = std::make_unique<HierarchicalProjector>(
        *artifacts_.grammar, provider, artifacts_.lexicon);
  }
}

Interpreter::~Interpreter() = default;

void Interpreter::Rescore(
    std::span<const std::string> x, ProjectionResult& result,
    const std::function<SyntheticSentence(size_t)>& lookup) const {
  std::vector<SyntheticSentence> pool{result.chosen};
  std::vector<double> deltas{result.distance};
  std::vector<size_t> sources{result.chosen_source};
  for (const ScoredCandidate& c : result.runner_ups) {
    pool.push_back(lookup(c.source));
    deltas.push_back(c.distance);
    sources.push_back(c.source);
  }
  ChunkLexicon empty;
  std::vector<RescoredCandidate> ranked = RescoreDeltaPrime(
      x, pool, *artifacts_.provider, config_.alpha,
      artifacts_.lexicon ? *artifacts_.lexicon : empty, artifacts_.grammar,
      deltas, &result.diagnostics.embed_calls);
  result.chosen = pool[ranked[0].index];
  result.chosen_source = sources[ranked[0].index];
  result.distance = ranked[0].score;
  result.runner_ups.clear();
  for (size_t i = 1; i < ranked.size(); ++i) {
    const SyntheticSentence& s = pool[ranked[i].index];
    result.runner_ups.push_back(
        {s.text(), s.program, ranked[i].score, sources[ranked[i].index]});
  }
}

Interpretation Interpreter::InterpretTokens(
    std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ProjectionError("empty utterance");
  const EmbeddingProvider& provider = *artifacts_.provider;
  const bool rescore = config_.rescore_with_matching;
  const size_t shortlist =
      rescore ? std::max(config_.runner_ups,
                         std::max<size_t>(config_.rescore_pool, 1) - 1)
              : config_.runner_ups;
  ProjectionResult result;
  switch (config_.mode) {
    case ProjectionMode::kFlat: {
      const EmbeddedCorpus& corpus = *artifacts_.corpus;
      result = ProjectFlat(tokens, corpus, provider, shortlist);
      if (rescore) {
        Rescore(tokens, result,
                [&](size_t i) { return corpus.sentences()[i]; });
      }
      break;
    }
    case ProjectionMode::kLsh: {
      const LshIndex& index = *artifacts_.index;
      result = ProjectLsh(tokens, index, provider, config_.lsh_radius, shortlist);
      if (rescore) {
        Rescore(tokens, result, [&](size_t i) {
          const IndexEntry& e = index.entries()[i];
          return SyntheticSentence{Tokenize(e.text), e.program, std::nullopt};
        });
      }
      break;
    }
    case ProjectionMode::kHier:
      result = hier_->Project(tokens, config_);
      break;
  }
  if (result.runner_ups.size() > config_.runner_ups) {
    result.runner_ups.resize(config_.runner_ups);
  }
  return {result.chosen.program, std::move(result)};
}

Interpretation Interpreter::Interpret(std::string_view utterance) const {
  return InterpretTokens(Tokenize(utterance));
}

Interpretation Interpret(std::string_view utterance, const Artifacts& artifacts,
                         const ProjectionConfig& config) {
  return Interpreter(artifacts, config).Interpret(utterance);
}

}  // namespace projlang
