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

#include "projlang/grammar.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "projlang/tokenize.h"

namespace projlang {

namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

bool IsNonterminalName(std::string_view s) {
  if (s.size() < 2 || s[0] != '$') return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[1])) || s[1] == '_')) {
    return false;
  }
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// A whitespace-delimited word with its 1-based column.
struct Word {
  std::string_view text;
  int column;
};

std::vector<Word> SplitWords(std::string_view line, size_t begin, size_t end) {
  std::vector<Word> words;
  size_t i = begin;
  while (i < end) {
    while (i < end && IsSpace(line[i])) ++i;
    size_t j = i;
    while (j < end && !IsSpace(line[j])) ++j;
    if (j > i) {
      words.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    }
    i = j;
  }
  return words;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<TemplatePiece> ParseTemplate(std::string_view text,
                                         int nonterminals, int line,
                                         int column) {
  std::vector<TemplatePiece> pieces;
  std::string literal;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '$' && i + 1 < text.size() &&
        std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      size_t j = i + 1;
      int index = 0;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j]))) {
        index = index * 10 + (text[j] - '0');
        ++j;
      }
      if (index == 0) {
        throw GrammarError("placeholder $0 is invalid; placeholders are 1-based",
                           line, column + static_cast<int>(i));
      }
      if (index > nonterminals) {
        throw GrammarError("placeholder $" + std::to_string(index) +
                               " exceeds nonterminal count " +
                               std::to_string(nonterminals),
                           line, column + static_cast<int>(i));
      }
      if (!literal.empty()) pieces.push_back({std::move(literal), 0});
      literal.clear();
      pieces.push_back({"", index});
      i = j;
    } else {
      literal.push_back(text[i++]);
    }
  }
  if (!literal.empty()) pieces.push_back({std::move(literal), 0});
  return pieces;
}

}  // namespace

GrammarError::GrammarError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ":" +
                                        std::to_string(column) + ": " + message
                                  : message),
      line_(line),
      column_(column) {}

int Rule::nonterminal_count() const {
  return static_cast<int>(std::count_if(
      rhs.begin(), rhs.end(), [](const RhsItem& r) { return r.is_nonterminal(); }));
}

std::optional<SymbolId> Grammar::FindSymbol(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

SymbolId Grammar::Intern(std::string_view name) {
  auto [it, inserted] =
      ids_.emplace(std::string(name), static_cast<SymbolId>(names_.size()));
  if (inserted) {
    names_.emplace_back(name);
    by_lhs_.emplace_back();
    np_.push_back(false);
  }
  return it->second;
}

size_t Grammar::max_fanout() const {
  size_t fanout = 0;
  for (const auto& alternatives : by_lhs_) {
    fanout = std::max(fanout, alternatives.size());
  }
  return fanout;
}

bool Grammar::has_np() const {
  return std::find(np_.begin(), np_.end(), true) != np_.end();
}

bool Grammar::IsCyclic() const {
  // 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<int> state(names_.size(), 0);
  std::vector<std::pair<SymbolId, size_t>> stack;
  std::vector<std::vector<SymbolId>> edges(names_.size());
  for (const Rule& r : rules_) {
    for (const RhsItem& item : r.rhs) {
      if (item.is_nonterminal()) edges[r.lhs].push_back(item.symbol);
    }
  }
  for (SymbolId s = 0; s < static_cast<SymbolId>(names_.size()); ++s) {
    if (state[s] != 0) continue;
    stack.push_back({s, 0});
    state[s] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < edges[node].size()) {
        SymbolId child = edges[node][next++];
        if (state[child] == 1) return true;
        if (state[child] == 0) {
          state[child] = 1;
          stack.push_back({child, 0});
        }
      } else {
        state[node] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

Grammar ParseGrammar(std::string_view source) {
  Grammar g;
  std::optional<std::string> declared_start;
  // First use of each nonterminal on a right-hand side or directive, for
  // reporting undefined symbols.
  std::unordered_map<SymbolId, std::pair<int, int>> first_use;
  std::vector<SymbolId> np_symbols;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= source.size()) {
    size_t eol = source.find('\n', pos);
    if (eol == std::string_view::npos) eol = source.size();
    std::string_view line = source.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;

    std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    if (trimmed.front() == '@') {
      std::vector<Word> words = SplitWords(line, 0, line.size());
      std::string_view directive = words[0].text;
      if (words.size() < 2) {
        throw GrammarError("directive " + std::string(directive) +
                               " needs a nonterminal",
                           line_no, words[0].column);
      }
      for (size_t i = 1; i < words.size(); ++i) {
        if (!IsNonterminalName(words[i].text)) {
          throw GrammarError(
              "expected nonterminal, got '" + std::string(words[i].text) + "'",
              line_no, words[i].column);
        }
      }
      if (directive == "@start") {
        if (words.size() != 2) {
          throw GrammarError("@start takes exactly one nonterminal", line_no,
                             words[2].column);
        }
        if (declared_start) {
          throw GrammarError("duplicate start symbol declaration", line_no,
                             words[0].column);
        }
        declared_start = std::string(words[1].text);
        SymbolId id = g.Intern(words[1].text);
        first_use.try_emplace(id, line_no, words[1].column);
      } else if (directive == "@np") {
        for (size_t i = 1; i < words.size(); ++i) {
          SymbolId id = g.Intern(words[i].text);
          first_use.try_emplace(id, line_no, words[i].column);
          np_symbols.push_back(id);
        }
      } else {
        throw GrammarError("unknown directive " + std::string(directive),
                           line_no, words[0].column);
      }
      continue;
    }

    size_t arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      throw GrammarError("expected '->'", line_no,
                         static_cast<int>(line.size()) + 1);
    }
    std::vector<Word> lhs_words = SplitWords(line, 0, arrow);
    if (lhs_words.size() != 1 || !IsNonterminalName(lhs_words[0].text)) {
      int col = lhs_words.empty() ? 1 : lhs_words[0].column;
      throw GrammarError("left-hand side must be a single nonterminal",
                         line_no, col);
    }
    size_t colon = line.find(':', arrow + 2);
    if (colon == std::string_view::npos) {
      throw GrammarError("expected ':' before semantics", line_no,
                         static_cast<int>(line.size()) + 1);
    }

    Rule rule;
    rule.line = line_no;
    rule.lhs = g.Intern(lhs_words[0].text);
    for (const Word& w : SplitWords(line, arrow + 2, colon)) {
      if (w.text.front() == '$') {
        if (!IsNonterminalName(w.text)) {
          throw GrammarError(
              "malformed nonterminal '" + std::string(w.text) + "'", line_no,
              w.column);
        }
        SymbolId id = g.Intern(w.text);
        first_use.try_emplace(id, line_no, w.column);
        rule.rhs.push_back({id, ""});
      } else {
        for (std::string& token : Tokenize(w.text)) {
          rule.rhs.push_back({-1, std::move(token)});
        }
      }
    }
    if (rule.rhs.empty()) {
      throw GrammarError("empty right-hand side", line_no,
                         static_cast<int>(arrow) + 3);
    }
    std::string_view sem = line.substr(colon + 1);
    size_t sem_offset = colon + 1;
    while (!sem.empty() && IsSpace(sem.front())) {
      sem.remove_prefix(1);
      ++sem_offset;
    }
    sem = Trim(sem);
    rule.semantics = std::string(sem);
    rule.pieces = ParseTemplate(sem, rule.nonterminal_count(), line_no,
                                static_cast<int>(sem_offset) + 1);
    g.by_lhs_[rule.lhs].push_back(static_cast<int>(g.rules_.size()));
    g.rules_.push_back(std::move(rule));
  }

  if (g.rules_.empty()) throw GrammarError("no rules");

  g.start_ = g.Intern(declared_start.value_or("$root"));
  for (SymbolId id = 0; id < static_cast<SymbolId>(g.names_.size()); ++id) {
    if (!g.by_lhs_[id].empty()) continue;
    auto use = first_use.find(id);
    int line = use == first_use.end() ? 0 : use->second.first;
    int column = use == first_use.end() ? 0 : use->second.second;
    throw GrammarError("undefined nonterminal " + g.names_[id], line, column);
  }
  for (SymbolId id : np_symbols) g.np_[id] = true;
  return g;
}

Grammar LoadGrammar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot open grammar file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseGrammar(buffer.str());
}

}  // namespace projlang
