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
#include <cstddef>
#include <map>
#include <unordered_map>
#include <utility>

#include "projlang/derivation.h"

namespace projlang {

namespace {

class Enumerator {
 public:
  explicit Enumerator(const Grammar& grammar) : grammar_(grammar) {}

  // budget < 0 means unbounded (acyclic grammars only).
  const std::vector<Derivation>& Derive(SymbolId symbol, int budget) {
    auto key = std::make_pair(symbol, budget);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Derivation> out;
    if (budget != 0) {
      const int child_budget = budget < 0 ? -1 : budget - 1;
      for (int rule : grammar_.rules_for(symbol)) {
        Derivation head = Derivation(symbol).Expand(grammar_, 0, rule);
        std::vector<const std::vector<Derivation>*> options;
        bool empty = false;
        for (const RhsItem& item : grammar_.rule(rule).rhs) {
          if (!item.is_nonterminal()) continue;
          options.push_back(&Derive(item.symbol, child_budget));
          if (options.back()->empty()) empty = true;
        }
        if (empty) continue;
        // Odometer over the children, rightmost digit fastest.
        std::vector<size_t> digits(options.size(), 0);
        while (true) {
          Derivation d = head;
          for (size_t i = 0; i < options.size(); ++i) {
            d = d.Graft(0, (*options[i])[digits[i]]);
          }
          out.push_back(std::move(d));
          auto i = static_cast<std::ptrdiff_t>(options.size()) - 1;
          while (i >= 0 && ++digits[i] == options[i]->size()) digits[i--] = 0;
          if (i < 0) break;
        }
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const Grammar& grammar_;
  std::map<std::pair<SymbolId, int>, std::vector<Derivation>> memo_;
};

}  // namespace

std::vector<Derivation> EnumerateDerivations(const Grammar& grammar,
                                             SymbolId symbol,
                                             std::optional<int> max_depth) {
  if (max_depth && *max_depth < 1) {
    throw GrammarError("max_depth must be positive");
  }
  if (!max_depth && grammar.IsCyclic()) {
    throw GrammarError("cyclic grammar requires a max_depth bound");
  }
  Enumerator e(grammar);
  return e.Derive(symbol, max_depth.value_or(-1));
}

std::vector<SyntheticSentence> Enumerate(const Grammar& grammar,
                                         std::optional<int> max_depth) {
  std::vector<SyntheticSentence> out;
  std::unordered_map<std::string, size_t> seen;
  std::vector<AmbiguityError::Conflict> conflicts;
  std::unordered_map<std::string, size_t> conflict_index;

  for (Derivation& d : EnumerateDerivations(grammar, grammar.start(), max_depth)) {
    SyntheticSentence s = MakeSentence(grammar, std::move(d));
    std::string text = s.text();
    auto [it, inserted] = seen.emplace(text, out.size());
    if (inserted) {
      out.push_back(std::move(s));
      continue;
    }
    const std::string& first = out[it->second].program;
    if (first == s.program) continue;
    auto [ci, fresh] = conflict_index.emplace(text, conflicts.size());
    if (fresh) conflicts.push_back({text, {first}});
    auto& programs = conflicts[ci->second].programs;
    if (std::find(programs.begin(), programs.end(), s.program) ==
        programs.end()) {
      programs.push_back(s.program);
    }
  }
  if (!conflicts.empty()) throw AmbiguityError(std::move(conflicts));
  return out;
}

}  // namespace projlang
