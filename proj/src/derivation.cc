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

#include "projlang/derivation.h"

#include <algorithm>

namespace projlang {

namespace {

// Walks the yield of `id` left to right, calling on_token for terminals and
// on_frontier for unexpanded nodes.
template <typename OnToken, typename OnFrontier>
void WalkYield(const Grammar& grammar, const Derivation& d, int id,
               OnToken&& on_token, OnFrontier&& on_frontier) {
  const Derivation::Node& node = d.node(id);
  if (!node.expanded()) {
    on_frontier(node);
    return;
  }
  size_t child = 0;
  for (const RhsItem& item : grammar.rule(node.rule).rhs) {
    if (item.is_nonterminal()) {
      WalkYield(grammar, d, node.children[child++], on_token, on_frontier);
    } else {
      on_token(item.token);
    }
  }
}

std::string ProgramOf(const Grammar& grammar, const Derivation& d, int id) {
  const Derivation::Node& node = d.node(id);
  std::string out;
  for (const TemplatePiece& piece : grammar.rule(node.rule).pieces) {
    if (piece.placeholder > 0) {
      out += ProgramOf(grammar, d, node.children[piece.placeholder - 1]);
    } else {
      out += piece.literal;
    }
  }
  return out;
}

}  // namespace

Derivation::Derivation(SymbolId root) {
  nodes_.push_back({root, -1, {}});
  frontier_.push_back(0);
}

int Derivation::DepthOf(int id) const {
  const Node& n = nodes_[id];
  if (!n.expanded()) return 0;
  int deepest = 0;
  for (int c : n.children) deepest = std::max(deepest, DepthOf(c));
  return deepest + 1;
}

int Derivation::Depth() const { return DepthOf(0); }

Derivation Derivation::Expand(const Grammar& grammar, size_t site,
                              int rule) const {
  if (site >= frontier_.size()) {
    throw DerivationError("expansion site " + std::to_string(site) +
                          " out of range (frontier size " +
                          std::to_string(frontier_.size()) + ")");
  }
  const int target = frontier_[site];
  const Rule& r = grammar.rule(rule);
  if (r.lhs != nodes_[target].symbol) {
    throw DerivationError("rule " + std::to_string(rule) + " does not expand " +
                          grammar.symbol_name(nodes_[target].symbol));
  }
  Derivation out = *this;
  out.nodes_[target].rule = rule;
  std::vector<int> added;
  for (const RhsItem& item : r.rhs) {
    if (!item.is_nonterminal()) continue;
    added.push_back(static_cast<int>(out.nodes_.size()));
    out.nodes_.push_back({item.symbol, -1, {}});
  }
  out.nodes_[target].children = added;
  out.frontier_.erase(out.frontier_.begin() + site);
  out.frontier_.insert(out.frontier_.begin() + site, added.begin(),
                       added.end());
  return out;
}

Derivation Derivation::Graft(size_t site, const Derivation& subtree) const {
  if (site >= frontier_.size()) {
    throw DerivationError("graft site " + std::to_string(site) +
                          " out of range");
  }
  const int target = frontier_[site];
  if (subtree.root().symbol != nodes_[target].symbol) {
    throw DerivationError("graft symbol mismatch");
  }
  Derivation out = *this;
  const int base = static_cast<int>(out.nodes_.size()) - 1;
  auto remap = [&](int id) { return id == 0 ? target : base + id; };
  for (size_t i = 1; i < subtree.nodes_.size(); ++i) {
    Node n = subtree.nodes_[i];
    for (int& c : n.children) c = remap(c);
    out.nodes_.push_back(std::move(n));
  }
  Node root = subtree.nodes_[0];
  for (int& c : root.children) c = remap(c);
  out.nodes_[target] = std::move(root);

  std::vector<int> inserted;
  for (int f : subtree.frontier_) inserted.push_back(remap(f));
  out.frontier_.erase(out.frontier_.begin() + site);
  out.frontier_.insert(out.frontier_.begin() + site, inserted.begin(),
                       inserted.end());
  return out;
}

nlohmann::json Derivation::ToNested() const {
  auto build = [&](auto&& self, int id) -> nlohmann::json {
    const Node& n = nodes_[id];
    if (!n.expanded()) return nullptr;
    nlohmann::json out = nlohmann::json::array({n.rule});
    for (int c : n.children) out.push_back(self(self, c));
    return out;
  };
  return build(build, 0);
}

void Derivation::AppendNested(const Grammar& grammar,
                              const nlohmann::json& nested, int id) {
  if (nested.is_null()) {
    frontier_.push_back(id);
    return;
  }
  if (!nested.is_array() || nested.empty() || !nested[0].is_number_integer()) {
    throw DerivationError("malformed nested derivation: " + nested.dump());
  }
  const int rule = nested[0].get<int>();
  if (rule < 0 || rule >= static_cast<int>(grammar.rules().size())) {
    throw DerivationError("rule index " + std::to_string(rule) +
                          " out of range");
  }
  const Rule& r = grammar.rule(rule);
  if (r.lhs != nodes_[id].symbol) {
    throw DerivationError("rule " + std::to_string(rule) +
                          " cannot expand " +
                          grammar.symbol_name(nodes_[id].symbol));
  }
  if (static_cast<int>(nested.size()) != r.nonterminal_count() + 1) {
    throw DerivationError("rule " + std::to_string(rule) + " expects " +
                          std::to_string(r.nonterminal_count()) + " children");
  }
  nodes_[id].rule = rule;
  size_t k = 1;
  for (const RhsItem& item : r.rhs) {
    if (!item.is_nonterminal()) continue;
    int child = static_cast<int>(nodes_.size());
    nodes_.push_back({item.symbol, -1, {}});
    nodes_[id].children.push_back(child);
    AppendNested(grammar, nested[k++], child);
  }
}

Derivation Derivation::FromNested(const Grammar& grammar,
                                  const nlohmann::json& nested) {
  if (!nested.is_array() || nested.empty() || !nested[0].is_number_integer()) {
    throw DerivationError("malformed nested derivation: " + nested.dump());
  }
  const int rule = nested[0].get<int>();
  if (rule < 0 || rule >= static_cast<int>(grammar.rules().size())) {
    throw DerivationError("rule index " + std::to_string(rule) +
                          " out of range");
  }
  Derivation d;
  d.nodes_.push_back({grammar.rule(rule).lhs, -1, {}});
  d.AppendNested(grammar, nested, 0);
  return d;
}

bool operator==(const Derivation& a, const Derivation& b) {
  return a.nodes_ == b.nodes_ && a.frontier_ == b.frontier_;
}

AmbiguityError::AmbiguityError(std::vector<Conflict> conflicts)
    : GrammarError([&] {
        std::string msg = "ambiguous grammar:";
        for (const Conflict& c : conflicts) {
          msg += " \"" + c.text + "\" ->";
          for (size_t i = 0; i < c.programs.size(); ++i) {
            msg += (i == 0 ? " " : " | ") + c.programs[i];
          }
          msg += ";";
        }
        msg.pop_back();
        return msg;
      }()),
      conflicts_(std::move(conflicts)) {}

std::vector<Derivation> Expansions(const Grammar& grammar, const Derivation& p,
                                   size_t site) {
  if (site >= p.frontier().size()) {
    throw DerivationError("expansion site " + std::to_string(site) +
                          " out of range (frontier size " +
                          std::to_string(p.frontier().size()) + ")");
  }
  SymbolId symbol = p.node(p.frontier()[site]).symbol;
  std::vector<Derivation> out;
  for (int rule : grammar.rules_for(symbol)) {
    out.push_back(p.Expand(grammar, site, rule));
  }
  return out;
}

Tokens Linearize(const Grammar& grammar, const Derivation& p,
                 const std::string& mask_token) {
  Tokens tokens;
  WalkYield(
      grammar, p, 0, [&](const std::string& t) { tokens.push_back(t); },
      [&](const Derivation::Node&) { tokens.push_back(mask_token); });
  return tokens;
}

std::string FrontierKey(const Grammar& grammar, const Derivation& p) {
  std::string key;
  WalkYield(
      grammar, p, 0,
      [&](const std::string& t) {
        key += t;
        key.push_back(' ');
      },
      [&](const Derivation::Node& n) {
        key.push_back('\x01');
        key += grammar.symbol_name(n.symbol);
        key.push_back(' ');
      });
  return key;
}

std::string Semantics(const Grammar& grammar, const Derivation& d) {
  if (!d.complete()) {
    throw DerivationError("semantics of an incomplete derivation");
  }
  return ProgramOf(grammar, d, 0);
}

int NpGroupCount(const Grammar& grammar, const Derivation& p) {
  int groups = 0;
  bool in_run = false;
  WalkYield(
      grammar, p, 0, [&](const std::string&) { in_run = false; },
      [&](const Derivation::Node& n) {
        if (grammar.is_np(n.symbol)) {
          if (!in_run) ++groups;
          in_run = true;
        } else {
          in_run = false;
        }
      });
  return groups;
}

SyntheticSentence MakeSentence(const Grammar& grammar, Derivation d) {
  SyntheticSentence s;
  s.tokens = Linearize(grammar, d, "");
  s.program = Semantics(grammar, d);
  s.derivation = std::move(d);
  return s;
}

}  // namespace projlang
