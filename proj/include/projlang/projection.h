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

#ifndef PROJLANG_PROJECTION_H_
#define PROJLANG_PROJECTION_H_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "projlang/chunker.h"
#include "projlang/derivation.h"
#include "projlang/embedding.h"
#include "projlang/grammar.h"
#include "projlang/lsh.h"

namespace projlang {

enum class ProjectionMode { kFlat, kLsh, kHier };

std::string_view ModeName(ProjectionMode mode);
// Throws std::invalid_argument for unknown names.
ProjectionMode ParseMode(std::string_view name);

struct ProjectionConfig {
  ProjectionMode mode = ProjectionMode::kFlat;
  size_t beam_width = 4;
  // Weight of the chunk matching cost in the rescoring distance.
  double alpha = 0.0;
  int lsh_radius = kDefaultProbeRadius;
  // Hierarchical search: drop top-level templates whose noun-phrase group
  // count differs from the input's chunk count.
  bool np_pruning = true;
  // Hierarchical search: fill np-flagged nonterminals from aligned chunks.
  bool chunk_alignment = true;
  bool rescore_with_matching = false;
  // Derivation depth bound; required for cyclic grammars in hier mode.
  std::optional<int> max_depth;
  size_t runner_ups = 5;
  // Flat/LSH rescoring considers this many best candidates by plain distance.
  size_t rescore_pool = 16;
};

struct ScoredCandidate {
  std::string text;
  std::string program;
  double distance = 0.0;
  size_t source = 0;  // position in the candidate set searched
};

struct ProjectionDiagnostics {
  size_t embed_calls = 0;
  size_t candidates_scored = 0;
  size_t pruned_hypotheses = 0;
  size_t steps = 0;
  int radius_used = -1;
  int radius_escalations = 0;
  size_t zero_norm = 0;  // distances computed against a zero vector
};

struct ProjectionResult {
  SyntheticSentence chosen;
  size_t chosen_source = 0;  // position of `chosen` in the candidate set
  double distance = 0.0;
  std::vector<ScoredCandidate> runner_ups;  // ascending, chosen excluded
  ProjectionDiagnostics diagnostics;
};

class ProjectionError : public std::runtime_error {
 public:
  ProjectionError(const std::string& message,
                  ProjectionDiagnostics diagnostics = {})
      : std::runtime_error(message), diagnostics_(diagnostics) {}
  const ProjectionDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  ProjectionDiagnostics diagnostics_;
};

// Synthetic sentences with their embeddings computed once.
class EmbeddedCorpus {
 public:
  static EmbeddedCorpus Build(std::vector<SyntheticSentence> sentences,
                              const EmbeddingProvider& provider);

  size_t size() const { return sentences_.size(); }
  const std::vector<SyntheticSentence>& sentences() const { return sentences_; }
  const std::vector<EmbeddingVector>& vectors() const { return vectors_; }
  const std::vector<std::string>& texts() const { return texts_; }

 private:
  std::vector<SyntheticSentence> sentences_;
  std::vector<EmbeddingVector> vectors_;
  std::vector<std::string> texts_;
};

// Exhaustive nearest synthetic sentence under cosine distance; ties go to
// the lexicographically smallest text.
ProjectionResult ProjectFlat(std::span<const std::string> x,
                             std::span<const SyntheticSentence> synth,
                             const EmbeddingProvider& provider,
                             size_t runner_ups = 5);
ProjectionResult ProjectFlat(std::span<const std::string> x,
                             const EmbeddedCorpus& corpus,
                             const EmbeddingProvider& provider,
                             size_t runner_ups = 5);

// Nearest sentence among the LSH candidates within `radius`. The radius
// grows until the candidate set is non-empty.
ProjectionResult ProjectLsh(std::span<const std::string> x,
                            const LshIndex& index,
                            const EmbeddingProvider& provider, int radius,
                            size_t runner_ups = 5);

struct RescoredCandidate {
  size_t index = 0;  // into the candidate list
  double delta = 0.0;
  double matching_cost = 0.0;
  double score = 0.0;  // delta + alpha * matching_cost
};

// Scores each candidate by sentence distance plus alpha times the chunk
// matching cost, ascending with ties broken by text. `known_deltas`, when
// non-empty, supplies the sentence distances already computed.
std::vector<RescoredCandidate> RescoreDeltaPrime(
    std::span<const std::string> x,
    std::span<const SyntheticSentence> candidates,
    const EmbeddingProvider& provider, double alpha,
    const ChunkLexicon& lexicon, const Grammar* grammar,
    std::span<const double> known_deltas = {},
    size_t* embed_calls = nullptr);

// Beam search over partial derivations, scoring each by the distance between
// the input and its masked linearization. Caches the complete yields of
// noun-phrase nonterminals across queries.
class HierarchicalProjector {
 public:
  HierarchicalProjector(const Grammar& grammar,
                        const EmbeddingProvider& provider,
                        const ChunkLexicon* lexicon = nullptr);

  ProjectionResult Project(std::span<const std::string> x,
                           const ProjectionConfig& config) const;

 private:
  struct NpYields {
    std::vector<Derivation> trees;
    std::vector<EmbeddingVector> vectors;
  };

  const NpYields& YieldsOf(SymbolId symbol, std::optional<int> max_depth,
                           size_t& embed_calls) const;

  const Grammar& grammar_;
  const EmbeddingProvider& provider_;
  const ChunkLexicon* lexicon_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<SymbolId, int>, std::unique_ptr<NpYields>> yields_;
};

ProjectionResult ProjectHier(std::span<const std::string> x,
                             const Grammar& grammar,
                             const EmbeddingProvider& provider,
                             const ProjectionConfig& config,
                             const ChunkLexicon* lexicon = nullptr);

// Everything interpretation may need; which fields are required depends on
// the mode.
struct Artifacts {
  const Grammar* grammar = nullptr;
  const EmbeddedCorpus* corpus = nullptr;
  const LshIndex* index = nullptr;
  const EmbeddingProvider* provider = nullptr;
  const ChunkLexicon* lexicon = nullptr;
};

struct Interpretation {
  std::string program;
  ProjectionResult result;
};

// Maps utterances to programs through their nearest synthetic paraphrase.
// Flat mode uses the corpus, or enumerates the grammar when no corpus is
// given; LSH mode needs an index; hier mode needs a grammar. Without an
// explicit lexicon one is seeded from the grammar.
class Interpreter {
 public:
  Interpreter(const Artifacts& artifacts, const ProjectionConfig& config);
  ~Interpreter();

  Interpretation Interpret(std::string_view utterance) const;
  Interpretation InterpretTokens(std::span<const std::string> tokens) const;

  const ProjectionConfig& config() const { return config_; }

 private:
  void Rescore(
      std::span<const std::string> x, ProjectionResult& result,
      const std::function<SyntheticSentence(size_t)>& lookup) const;

  Artifacts artifacts_;
  ProjectionConfig config_;
  std::unique_ptr<EmbeddedCorpus> owned_corpus_;
  std::unique_ptr<ChunkLexicon> owned_lexicon_;
  std::unique_ptr<HierarchicalProjector> hier_;
};

Interpretation Interpret(std::string_view utterance, const Artifacts& artifacts,
                         const ProjectionConfig& config);

}  // namespace projlang

#endif  // PROJLANG_PROJECTION_H_
