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

#ifndef PROJLANG_GRAMMAR_H_
#define PROJLANG_GRAMMAR_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace projlang {

using SymbolId = int;

// Raised for malformed or invalid grammars. line/column are 1-based and zero
// when the error is not tied to a source position.
class GrammarError : public std::runtime_error {
 public:
  explicit GrammarError(const std::string& message, int line = 0,
                        int column = 0);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// One item on a right-hand side: a terminal token or a nonterminal.
struct RhsItem {
  SymbolId symbol = -1;  // >= 0 for nonterminals
  std::string token;     // terminal text when symbol < 0

  bool is_nonterminal() const { return symbol >= 0; }
};

// Piece of a semantic template: literal text, or a 1-based placeholder
// referring to the i-th nonterminal of the right-hand side.
struct TemplatePiece {
  std::string literal;
  int placeholder = 0;
};

struct Rule {
  SymbolId lhs = -1;
  std::vector<RhsItem> rhs;
  std::string semantics;
  std::vector<TemplatePiece> pieces;
  int line = 0;

  int nonterminal_count() const;
};

// A context-free grammar whose rules carry semantic templates. Immutable
// once parsed.
class Grammar {
 public:
  SymbolId start() const { return start_; }
  size_t symbol_count() const { return names_.size(); }
  const std::string& symbol_name(SymbolId id) const { return names_[id]; }
  std::optional<SymbolId> FindSymbol(std::string_view name) const;

  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(int index) const { return rules_[index]; }
  // Rule indices with the given left-hand side, in source order.
  std::span<const int> rules_for(SymbolId id) const { return by_lhs_[id]; }
  // Largest number of alternatives of any nonterminal.
  size_t max_fanout() const;

  bool is_np(SymbolId id) const { return np_[id]; }
  bool has_np() const;

  // True when some nonterminal can derive itself.
  bool IsCyclic() const;

 private:
  friend Grammar ParseGrammar(std::string_view source);

  SymbolId Intern(std::string_view name);

  std::vector<std::string> names_;
  std::unordered_map<std::string, SymbolId> ids_;
  std::vector<Rule> rules_;
  std::vector<std::vector<int>> by_lhs_;
  std::vector<bool> np_;
  SymbolId start_ = -1;
};

// Parses the line-oriented grammar format:
//
//   # comment
//   @start $root
//   @np $obj
//   $root -> go to the $obj : (go-to $1)
//
// Rule order follows the source.
Grammar ParseGrammar(std::string_view source);

Grammar LoadGrammar(const std::string& path);

}  // namespace projlang

#endif  // PROJLANG_GRAMMAR_H_
