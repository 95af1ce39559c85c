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

#ifndef PROJLANG_DERIVATION_H_
#define PROJLANG_DERIVATION_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "projlang/grammar.h"
#include "projlang/tokenize.h"

namespace projlang {

class DerivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two different programs share one sentence text, so the grammar is not
// invertible. Each conflict lists the text followed by its programs.
class AmbiguityError : public GrammarError {
 public:
  struct Conflict {
    std::string text;
    std::vector<std::string> programs;
  };

  explicit AmbiguityError(std::vector<Conflict> conflicts);

  const std::vector<Conflict>& conflicts() const { return conflicts_; }

 private:
  std::vector<Conflict> conflicts_;
};

// A partial or complete derivation tree. Nodes live in a flat vector; node 0
// is the root. A node without a rule is an unexpanded nonterminal and sits on
// the frontier. Values are immutable: expanding returns a new derivation.
class Derivation {
 public:
  struct Node {
    SymbolId symbol = -1;
    int rule = -1;
    std::vector<int> children;  // one per right-hand-side nonterminal

    bool expanded() const { return rule >= 0; }
  };

  // A bare, unexpanded nonterminal.
  explicit Derivation(SymbolId root);
  static Derivation Start(const Grammar& grammar) {
    return Derivation(grammar.start());
  }

  bool complete() const { return frontier_.empty(); }
  // Unexpanded node ids, left to right.
  const std::vector<int>& frontier() const { return frontier_; }
  const Node& node(int id) const { return nodes_[id]; }
  const Node& root() const { return nodes_[0]; }
  size_t size() const { return nodes_.size(); }

  // Longest root-to-leaf chain of applied rules.
  int Depth() const;

  // Applies `rule` to the frontier nonterminal at position `site`.
  Derivation Expand(const Grammar& grammar, size_t site, int rule) const;

  // Replaces the frontier nonterminal at `site` by `subtree`, whose root must
  // carry the same symbol.
  Derivation Graft(size_t site, const Derivation& subtree) const;

  // Nested rule indices: [rule, child, child, ...]; frontier nodes are null.
  nlohmann::json ToNested() const;
  static Derivation FromNested(const Grammar& grammar,
                               const nlohmann::json& nested);

  friend bool operator==(const Derivation& a, const Derivation& b);

 private:
  Derivation() = default;
  int DepthOf(int id) const;
  void AppendNested(const Grammar& grammar, const nlohmann::json& nested,
                    int id);

  std::vector<Node> nodes_;
  std::vector<int> frontier_;
};

inline bool operator==(const Derivation::Node& a, const Derivation::Node& b) {
  return a.symbol == b.symbol && a.rule == b.rule && a.children == b.children;
}

// An utterance produced by the grammar together with its program. The
// derivation is absent when the sentence was read back without a grammar.
struct SyntheticSentence {
  Tokens tokens;
  std::string program;
  std::optional<Derivation> derivation;

  std::string text() const { return JoinTokens(tokens); }
};

// All single-step expansions of the frontier nonterminal at `site`, one per
// rule of that nonterminal, in rule order.
std::vector<Derivation> Expansions(const Grammar& grammar, const Derivation& p,
                                   size_t site);

// Yield of `p` with each frontier nonterminal rendered as `mask_token`.
Tokens Linearize(const Grammar& grammar, const Derivation& p,
                 const std::string& mask_token);

// Like Linearize, but frontier nonterminals keep their identity. Two partial
// derivations with equal keys have the same set of completions.
std::string FrontierKey(const Grammar& grammar, const Derivation& p);

// Instantiates the semantic templates bottom-up. Throws DerivationError for
// incomplete derivations.
std::string Semantics(const Grammar& grammar, const Derivation& d);

// Number of maximal runs of adjacent np-flagged frontier nonterminals in the
// yield of `p`.
int NpGroupCount(const Grammar& grammar, const Derivation& p);

// All complete derivations of `symbol` in depth-first rule order. Depth is
// bounded by `max_depth` when given; cyclic grammars require it.
std::vector<Derivation> EnumerateDerivations(const Grammar& grammar,
                                             SymbolId symbol,
                                             std::optional<int> max_depth);

// Every sentence of the grammar with its program. Identical (text, program)
// pairs are merged; a text with two different programs is an error.
std::vector<SyntheticSentence> Enumerate(const Grammar& grammar,
                                         std::optional<int> max_depth = {});

// Builds the sentence for a complete derivation.
SyntheticSentence MakeSentence(const Grammar& grammar, Derivation d);

}  // namespace projlang

#endif  // PROJLANG_DERIVATION_H_
