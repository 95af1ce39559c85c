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

#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "projlang/dataset.h"
#include "projlang/derivation.h"
#include "projlang/grammar.h"
#include "projlang/tokenize.h"
#include "test_util.h"

namespace projlang {
namespace {

using testing::DataPath;

Grammar G1() { return LoadGrammar(DataPath("g1.grammar")); }

// Derives `text` from the start symbol by trying every rule at the leftmost
// site; G1 is small enough for this to be instant.
Derivation DeriveText(const Grammar& g, const std::string& text) {
  for (const SyntheticSentence& s : Enumerate(g)) {
    if (s.text() == text) return *s.derivation;
  }
  FAIL("no derivation for " << text);
  return Derivation::Start(g);
}

std::string ExpectGrammarError(const std::string& source) {
  try {
    ParseGrammar(source);
  } catch (const GrammarError& e) {
    return e.what();
  }
  FAIL("expected a grammar error for: " << source);
  return "";
}

TEST_CASE("tokenize lowercases and splits punctuation") {
  CHECK(Tokenize("Go to the RED ball!") ==
        Tokens{"go", "to", "the", "red", "ball", "!"});
  CHECK(Tokenize("  a\tb\n") == Tokens{"a", "b"});
  CHECK(Tokenize("").empty());
  CHECK(JoinTokens(Tokens{"a", "b"}) == "a b");
}

TEST_CASE("parse G1") {
  Grammar g = G1();
  CHECK(g.symbol_count() == 3);
  CHECK(g.rules().size() == 6);
  CHECK(g.symbol_name(g.start()) == "$root");
  REQUIRE(g.FindSymbol("$obj"));
  REQUIRE(g.FindSymbol("$color"));
  CHECK(g.is_np(*g.FindSymbol("$obj")));
  CHECK_FALSE(g.is_np(*g.FindSymbol("$color")));
  CHECK(g.has_np());
  CHECK(g.max_fanout() == 2);
  CHECK_FALSE(g.IsCyclic());
  CHECK(g.rule(0).nonterminal_count() == 1);
  CHECK(g.rule(4).semantics == "red");
}

TEST_CASE("grammar errors") {
  CHECK(ExpectGrammarError("") == "no rules");
  CHECK(ExpectGrammarError("# only a comment\n") == "no rules");
  CHECK(ExpectGrammarError("$root -> go : (go $1)").find(
            "placeholder $1 exceeds nonterminal count 0") != std::string::npos);
  CHECK(ExpectGrammarError("$root go : go").find("line 1") !=
        std::string::npos);
  CHECK(ExpectGrammarError("$root -> go $x : (go $1)")
            .find("undefined nonterminal $x") != std::string::npos);
  CHECK(ExpectGrammarError("$root -> : x").find("empty right-hand side") !=
        std::string::npos);
  CHECK(ExpectGrammarError("@start $a\n@start $b\n$a -> x : x\n$b -> y : y")
            .find("line 2") != std::string::npos);
}

TEST_CASE("start directive") {
  Grammar g = ParseGrammar("$a -> x $b : (a $1)\n$b -> y : y\n@start $b\n");
  CHECK(g.symbol_name(g.start()) == "$b");
  auto data = Enumerate(g);
  REQUIRE(data.size() == 1);
  CHECK(data[0].text() == "y");
}

TEST_CASE("enumerate G1") {
  Grammar g = G1();
  auto data = Enumerate(g);
  REQUIRE(data.size() == 8);
  CHECK(data[0].text() == "go to the red ball");
  CHECK(data[0].program == "(go-to (ball red))");
  std::set<std::string> texts, programs;
  for (const auto& s : data) {
    texts.insert(s.text());
    programs.insert(s.program);
    REQUIRE(s.derivation);
    CHECK(s.derivation->complete());
    CHECK(Semantics(g, *s.derivation) == s.program);
    CHECK(Linearize(g, *s.derivation, "[MASK]") == s.tokens);
  }
  CHECK(texts.size() == 8);
  CHECK(programs.size() == 8);
  CHECK(texts.count("pick up the yellow door"));
  // Deterministic order.
  auto again = Enumerate(g);
  for (size_t i = 0; i < data.size(); ++i) {
    CHECK(again[i].text() == data[i].text());
  }
}

TEST_CASE("ambiguity is reported, duplicates are merged") {
  std::string base = testing::ReadText(DataPath("g1.grammar"));
  {
    Grammar g = ParseGrammar(base + "$root -> go to the red ball : (noop)\n");
    try {
      Enumerate(g);
      FAIL("expected ambiguity");
    } catch (const AmbiguityError& e) {
      CHECK(std::string(e.what()).find("go to the red ball") !=
            std::string::npos);
      REQUIRE(e.conflicts().size() == 1);
      CHECK(e.conflicts()[0].programs.size() == 2);
    }
  }
  {
    Grammar g = ParseGrammar(
        base + "$root -> go to the red ball : (go-to (ball red))\n");
    CHECK(Enumerate(g).size() == 8);
  }
}

TEST_CASE("cyclic grammars need a depth bound") {
  Grammar g = LoadGrammar(DataPath("cyclic.grammar"));
  CHECK(g.IsCyclic());
  CHECK_THROWS_AS(Enumerate(g), GrammarError);
  // Depth 3: one object; depth 4: two objects.
  CHECK(Enumerate(g, 3).size() == 2);
  auto data = Enumerate(g, 4);
  CHECK(data.size() == 6);
  for (const auto& s : data) CHECK(s.derivation->Depth() <= 4);
  CHECK(Enumerate(g, 5).size() == 14);
}

TEST_CASE("expansions") {
  Grammar g = G1();
  Derivation root = Derivation::Start(g);
  CHECK(root.frontier().size() == 1);
  auto first = Expansions(g, root, 0);
  CHECK(first.size() == 2);

  // Frontier [$color].
  Derivation p = first[0].Expand(g, 0, 2);
  REQUIRE(p.frontier().size() == 1);
  CHECK(p.node(p.frontier()[0]).symbol == *g.FindSymbol("$color"));
  auto colors = Expansions(g, p, 0);
  REQUIRE(colors.size() == 2);
  CHECK(colors[0].complete());
  CHECK(colors[1].complete());
  CHECK(Semantics(g, colors[0]) == "(go-to (ball red))");
  CHECK(Semantics(g, colors[1]) == "(go-to (ball yellow))");

  CHECK_THROWS(Expansions(g, colors[0], 0));
  CHECK_THROWS(Expansions(g, p, 1));
}

TEST_CASE("linearize") {
  Grammar g = G1();
  Derivation root = Derivation::Start(g);
  CHECK(Linearize(g, root, "[MASK]") == Tokens{"[MASK]"});
  Derivation go = root.Expand(g, 0, 0);
  CHECK(Linearize(g, go, "[MASK]") == Tokens{"go", "to", "the", "[MASK]"});
  Derivation d = DeriveText(g, "pick up the yellow door");
  CHECK(Linearize(g, d, "[MASK]") ==
        Tokens{"pick", "up", "the", "yellow", "door"});
}

TEST_CASE("frontier key separates symbols that share a mask") {
  Grammar g = ParseGrammar(
      "$root -> $a : (r $1)\n$root -> $b : (s $1)\n$a -> x : x\n$b -> y : y\n");
  Derivation root = Derivation::Start(g);
  Derivation a = root.Expand(g, 0, 0), b = root.Expand(g, 0, 1);
  CHECK(Linearize(g, a, "[MASK]") == Linearize(g, b, "[MASK]"));
  CHECK(FrontierKey(g, a) != FrontierKey(g, b));
}

TEST_CASE("semantics") {
  Grammar g = G1();
  CHECK(Semantics(g, DeriveText(g, "pick up the red door")) ==
        "(pick-up (door red))");
  CHECK(Semantics(g, DeriveText(g, "go to the yellow ball")) ==
        "(go-to (ball yellow))");
  CHECK_THROWS_AS(Semantics(g, Derivation::Start(g).Expand(g, 0, 0)),
                  DerivationError);
}

TEST_CASE("np group count") {
  Grammar two = ParseGrammar(
      "$root -> put the $item next to $item : (put $1 $2)\n"
      "$item -> box : box\n@np $item\n");
  CHECK(NpGroupCount(two, Derivation::Start(two).Expand(two, 0, 0)) == 2);

  Grammar g = G1();
  CHECK(NpGroupCount(g, Derivation::Start(g).Expand(g, 0, 0)) == 1);
  // Only frontier positions count.
  CHECK(NpGroupCount(g, DeriveText(g, "go to the red ball")) == 0);

  Grammar adjacent = ParseGrammar(
      "$root -> put $a $b near $a : (put $1 $2 $3)\n"
      "$a -> x : x\n$b -> y : y\n@np $a $b\n");
  CHECK(NpGroupCount(adjacent,
                     Derivation::Start(adjacent).Expand(adjacent, 0, 0)) == 2);

  Grammar none = ParseGrammar("$root -> go $x : (go $1)\n$x -> home : home\n");
  CHECK(NpGroupCount(none, Derivation::Start(none).Expand(none, 0, 0)) == 0);
}

TEST_CASE("nested derivation round trip") {
  Grammar g = G1();
  for (const auto& s : Enumerate(g)) {
    auto nested = s.derivation->ToNested();
    CHECK(Derivation::FromNested(g, nested) == *s.derivation);
  }
  Derivation partial = Derivation::Start(g).Expand(g, 0, 1);
  CHECK(Derivation::FromNested(g, partial.ToNested()) == partial);
}

TEST_CASE("graft") {
  Grammar g = G1();
  Derivation p = Derivation::Start(g).Expand(g, 0, 0);
  Derivation obj(*g.FindSymbol("$obj"));
  obj = obj.Expand(g, 0, 3).Expand(g, 0, 5);
  Derivation full = p.Graft(0, obj);
  CHECK(full.complete());
  CHECK(Semantics(g, full) == "(go-to (door yellow))");
  CHECK_THROWS(p.Graft(0, Derivation::Start(g)));
}

TEST_CASE("dataset round trip") {
  Grammar g = G1();
  auto data = Enumerate(g);
  std::stringstream buffer;
  WriteDataset(buffer, data);
  std::string first = buffer.str();
  auto back = ReadDataset(buffer, &g);
  REQUIRE(back.size() == data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    CHECK(back[i].tokens == data[i].tokens);
    CHECK(back[i].program == data[i].program);
    REQUIRE(back[i].derivation);
    CHECK(*back[i].derivation == *data[i].derivation);
  }
  std::stringstream again;
  WriteDataset(again, back);
  CHECK(again.str() == first);

  std::stringstream bad("{\"version\":7}\n");
  CHECK_THROWS_AS(ReadDataset(bad, &g), DatasetError);
}

TEST_CASE("random acyclic grammars match a brute-force count") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto rg = testing::MakeRandomAcyclicGrammar(rng);
    Grammar g = ParseGrammar(rg.source);
    auto data = Enumerate(g);
    CAPTURE(rg.source);
    CHECK(data.size() == testing::BruteForceCount(rg));
    std::set<std::string> texts, programs;
    for (const auto& s : data) {
      texts.insert(s.text());
      programs.insert(s.program);
      CHECK(Semantics(g, *s.derivation) == s.program);
    }
    CHECK(texts.size() == data.size());
    CHECK(programs.size() == data.size());
  }
}

TEST_CASE("frontier shrinks to empty along any expansion path") {
  Grammar g = LoadGrammar(DataPath("babyai.grammar"));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Derivation p = Derivation::Start(g);
    int steps = 0;
    while (!p.complete()) {
      auto next = Expansions(g, p, 0);
      REQUIRE_FALSE(next.empty());
      p = next[rng() % next.size()];
      REQUIRE(++steps < 100);
    }
    CHECK_FALSE(Semantics(g, p).empty());
  }
}

TEST_CASE("fixture sizes") {
  CHECK(Enumerate(LoadGrammar(DataPath("g1x.grammar"))).size() == 72);
  CHECK(Enumerate(LoadGrammar(DataPath("babyai.grammar"))).size() == 582);
  size_t calendar = Enumerate(LoadGrammar(DataPath("calendar.grammar"))).size();
  CHECK(calendar > 50);
  CHECK(calendar <= 1000);
  CHECK(Enumerate(LoadGrammar(DataPath("stress.grammar"))).size() >= 40000);
}

}  // namespace
}  // namespace projlang
