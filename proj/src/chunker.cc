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

#include "projlang/chunker.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace projlang {

namespace {

const std::set<std::string>& SeedDeterminers() {
  static const std::set<std::string> kDeterminers = {"a", "an", "the"};
  return kDeterminers;
}

// Appends the yield of node `id`, recording outermost np subtrees.
void CollectYield(const Grammar& grammar, const Derivation& d, int id,
                  bool inside_np, Tokens& tokens, std::vector<Chunk>& chunks) {
  const Derivation::Node& node = d.node(id);
  const bool opens = !inside_np && grammar.is_np(node.symbol);
  const size_t begin = tokens.size();
  if (node.expanded()) {
    size_t child = 0;
    for (const RhsItem& item : grammar.rule(node.rule).rhs) {
      if (item.is_nonterminal()) {
        CollectYield(grammar, d, node.children[child++], inside_np || opens,
                     tokens, chunks);
      } else {
        tokens.push_back(item.token);
      }
    }
  }
  if (opens && tokens.size() > begin) {
    Chunk c;
    c.begin = begin;
    c.end = tokens.size();
    c.tokens.assign(tokens.begin() + begin, tokens.end());
    chunks.push_back(std::move(c));
  }
}

}  // namespace

void ChunkLexicon::Merge(const ChunkLexicon& other) {
  determiners.insert(other.determiners.begin(), other.determiners.end());
  adjectives.insert(other.adjectives.begin(), other.adjectives.end());
  nouns.insert(other.nouns.begin(), other.nouns.end());
}

ChunkLexicon ParseChunkLexicon(std::string_view text) {
  ChunkLexicon lexicon;
  std::set<std::string>* section = nullptr;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string word;
    if (!(words >> word) || word[0] == '#') continue;
    if (word == "[det]") {
      section = &lexicon.determiners;
    } else if (word == "[adj]") {
      section = &lexicon.adjectives;
    } else if (word == "[noun]") {
      section = &lexicon.nouns;
    } else if (word.front() == '[') {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": unknown section " + word);
    } else {
      if (!section) {
        throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                 ": word outside a section");
      }
      do {
        for (std::string& t : Tokenize(word)) section->insert(std::move(t));
      } while (words >> word);
    }
  }
  return lexicon;
}

ChunkLexicon LoadChunkLexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseChunkLexicon(buffer.str());
}

ChunkLexicon SeedLexiconFromGrammar(const Grammar& grammar,
                                    std::optional<int> max_depth) {
  ChunkLexicon lexicon;
  lexicon.determiners = SeedDeterminers();
  for (SymbolId s = 0; s < static_cast<SymbolId>(grammar.symbol_count()); ++s) {
    if (!grammar.is_np(s)) continue;
    for (const Derivation& d : EnumerateDerivations(grammar, s, max_depth)) {
      Tokens yield = Linearize(grammar, d, "");
      for (size_t i = 0; i < yield.size(); ++i) {
        if (i + 1 == yield.size()) {
          lexicon.nouns.insert(yield[i]);
        } else if (i == 0 && SeedDeterminers().count(yield[i])) {
          lexicon.determiners.insert(yield[i]);
        } else {
          lexicon.adjectives.insert(yield[i]);
        }
      }
    }
  }
  return lexicon;
}

std::vector<Chunk> ExtractChunks(std::span<const std::string> tokens,
                                 const ChunkLexicon& lexicon) {
  // States of the pattern automaton.
  enum : unsigned { kStart = 1, kDet = 2, kAdj = 4, kNoun = 8 };
  std::vector<Chunk> chunks;
  size_t i = 0;
  while (i < tokens.size()) {
    unsigned states = kStart;
    size_t best_end = i;
    for (size_t j = i; j < tokens.size() && states != 0; ++j) {
      const std::string& w = tokens[j];
      unsigned next = 0;
      if ((states & kStart) && lexicon.determiners.count(w)) next |= kDet;
      if ((states & (kStart | kDet | kAdj)) && lexicon.adjectives.count(w)) {
        next |= kAdj;
      }
      if (lexicon.nouns.count(w)) next |= kNoun;  // every live state
      states = next;
      if (states & kNoun) best_end = j + 1;
    }
    if (best_end == i) {
      ++i;
      continue;
    }
    Chunk c;
    c.begin = i;
    c.end = best_end;
    c.tokens.assign(tokens.begin() + i, tokens.begin() + best_end);
    chunks.push_back(std::move(c));
    i = best_end;
  }
  return chunks;
}

std::vector<Chunk> SynthChunks(const Grammar& grammar, const Derivation& d) {
  Tokens tokens;
  std::vector<Chunk> chunks;
  CollectYield(grammar, d, 0, false, tokens, chunks);
  return chunks;
}

std::vector<Chunk> SynthChunks(const SyntheticSentence& s,
                               const Grammar* grammar,
                               const ChunkLexicon* lexicon) {
  if (grammar && s.derivation) return SynthChunks(*grammar, *s.derivation);
  if (lexicon) return ExtractChunks(s.tokens, *lexicon);
  return {};
}

}  // namespace projlang
