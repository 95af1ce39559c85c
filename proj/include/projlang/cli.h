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

#ifndef PROJLANG_CLI_H_
#define PROJLANG_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace projlang::cli {

// Exit status for every failure: bad usage, unreadable inputs, grammar or
// embedding errors, failed projections.
inline constexpr int kExitError = 2;

struct RunConfig {
  std::string subcommand;  // generate | index | project | eval
  std::string grammar_path;
  std::string synth_path;
  std::string embeddings = "reference";
  std::string index_path;
  std::string input_path = "-";
  std::string out_path = "-";
  std::string lexicon_path;
  std::string pred_path;
  std::string gold_path;
  std::string mode = "flat";
  size_t beam = 4;
  double alpha = 0.0;
  int radius = 2;
  int bits = 16;
  uint64_t seed = 0;
  std::optional<int> max_depth;
  bool no_prune = false;
  bool no_chunk_align = false;
};

int CmdGenerate(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdIndex(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdProject(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdEval(const RunConfig& config, std::ostream& out, std::ostream& err);

int Run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to the subcommand.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace projlang::cli

#endif  // PROJLANG_CLI_H_
