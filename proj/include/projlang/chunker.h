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

#ifndef PROJLANG_CHUNKER_H_
#define PROJLANG_CHUNKER_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "projlang/derivation.h"
#include "projlang/grammar.h"
#include "projlang/tokenize.h"

namespace projlang {

// A contiguous noun-phrase span [begin, end) of a token sequence.
struct Chunk {
  Tokens tokens;
  size_t begin = 0;
  size_t end = 0;

  std::string text() const { return JoinTokens(tokens); }
};

// Word classes for the chunk pattern. A word may sit in several sets.
struct ChunkLexicon {
  std::set<std::string> determiners;
  std::set<std::string> adjectives;
  std::set<std::string> nouns;

  void Merge(const ChunkLexicon& other);
  bool empty() const {
    return determiners.empty() && adjectives.empty() && nouns.empty();
  }
};

// Sections [det], [adj] and [noun], one word per line; '#' comments.
ChunkLexicon ParseChunkLexicon(std::string_view text);
ChunkLexicon LoadChunkLexicon(const std::string& path);

// Derives a lexicon from the yields of the grammar's np-flagged
// nonterminals: the last token of each yield is a noun, a leading a/an/the
// is a determiner, and everything in between is an adjective. Cyclic
// grammars are explored up to `max_depth`.
ChunkLexicon SeedLexiconFromGrammar(const Grammar& grammar,
                                    std::optional<int> max_depth = {});

// Maximal matches of `determiner? adjective* noun+`, scanned left to right
// with longest match at each start position.
std::vector<Chunk> ExtractChunks(std::span<const std::string> tokens,
                                 const ChunkLexicon& lexicon);

// Yields of the outermost np-flagged subtrees of a complete derivation, in
// sentence order.
std::vector<Chunk> SynthChunks(const Grammar& grammar, const Derivation& d);

// Uses the derivation when present, otherwise falls back to the lexicon
// chunker on the sentence text.
std::vector<Chunk> SynthChunks(const SyntheticSentence& s,
                               const Grammar* grammar,
                               const ChunkLexicon* lexicon);

}  // namespace projlang

#endif  // PROJLANG_CHUNKER_H_
