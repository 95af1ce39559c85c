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

#include <string>
#include <vector>

#include "doctest.h"
#include "projlang/chunker.h"
#include "projlang/derivation.h"
#include "projlang/grammar.h"
#include "test_util.h"

namespace projlang {
namespace {

using testing::DataPath;

std::vector<std::string> Texts(const std::vector<Chunk>& chunks) {
  std::vector<std::string> out;
  for (const Chunk& c : chunks) out.push_back(c.text());
  return out;
}

std::vector<std::string> Extract(const std::string& text,
                                 const ChunkLexicon& lexicon) {
  Tokens t = Tokenize(text);
  return Texts(ExtractChunks(t, lexicon));
}

ChunkLexicon BabyAiLexicon() {
  ChunkLexicon lexicon =
      SeedLexiconFromGrammar(LoadGrammar(DataPath("babyai.grammar")));
  lexicon.Merge(LoadChunkLexicon(DataPath("babyai.lexicon")));
  return lexicon;
}

TEST_CASE("lexicon parsing") {
  ChunkLexicon l = ParseChunkLexicon(
      "# comment\n[det]\nthe\n[adj]\nred  blue\n[noun]\nball\n");
  CHECK(l.determiners == std::set<std::string>{"the"});
  CHECK(l.adjectives == std::set<std::string>{"blue", "red"});
  CHECK(l.nouns == std::set<std::string>{"ball"});
  CHECK_THROWS(ParseChunkLexicon("ball\n"));
  CHECK_THROWS(ParseChunkLexicon("[verb]\ngo\n"));
}

TEST_CASE("lexicon seeded from np yields") {
  ChunkLexicon l = SeedLexiconFromGrammar(LoadGrammar(DataPath("g1.grammar")));
  CHECK(l.nouns == std::set<std::string>{"ball", "door"});
  CHECK(l.adjectives == std::set<std::string>{"red", "yellow"});
  CHECK(l.determiners.count("the"));
  CHECK(l.determiners.count("a"));
}

TEST_CASE("extract chunks") {
  ChunkLexicon lexicon = BabyAiLexicon();
  CHECK(Extract("put the yellow block beside the top door", lexicon) ==
        std::vector<std::string>{"the yellow block", "the top door"});
  CHECK(Extract("the dark blue crate adjacent to the opening", lexicon) ==
        std::vector<std::string>{"the dark blue crate", "the opening"});
  CHECK(Extract("go quickly", lexicon).empty());
  CHECK(Extract("", lexicon).empty());
  // Dangling determiners and adjectives are not chunks.
  CHECK(Extract("the red the", lexicon).empty());
  // Noun runs stay together.
  CHECK(Extract("a box door", lexicon) ==
        std::vector<std::string>{"a box door"});

  Tokens t = Tokenize("go to the red ball now");
  auto chunks = ExtractChunks(t, lexicon);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0].begin == 2);
  CHECK(chunks[0].end == 5);
}

TEST_CASE("synthetic chunks come from np subtrees") {
  Grammar g1 = LoadGrammar(DataPath("g1.grammar"));
  for (const auto& s : Enumerate(g1)) {
    if (s.text() == "go to the red ball") {
      CHECK(Texts(SynthChunks(g1, *s.derivation)) ==
            std::vector<std::string>{"red ball"});
      auto chunks = SynthChunks(g1, *s.derivation);
      CHECK(chunks[0].begin == 3);
      CHECK(chunks[0].end == 5);
    }
  }

  Grammar plain = ParseGrammar("$root -> go $x : (go $1)\n$x -> home : home\n");
  for (const auto& s : Enumerate(plain)) {
    CHECK(SynthChunks(plain, *s.derivation).empty());
  }

  Grammar babyai = LoadGrammar(DataPath("babyai.grammar"));
  bool found = false;
  for (const auto& s : Enumerate(babyai)) {
    if (s.text() == "put a yellow box next to a gray door") {
      found = true;
      CHECK(Texts(SynthChunks(babyai, *s.derivation)) ==
            std::vector<std::string>{"yellow box", "gray door"});
    }
  }
  CHECK(found);
}

TEST_CASE("synthetic chunks without a derivation use the lexicon") {
  ChunkLexicon lexicon = BabyAiLexicon();
  SyntheticSentence s{Tokenize("open the red door"), "(open (door red))", {}};
  CHECK(Texts(SynthChunks(s, nullptr, &lexicon)) ==
        std::vector<std::string>{"the red door"});
  CHECK(SynthChunks(s, nullptr, nullptr).empty());
}

}  // namespace
}  // namespace projlang
