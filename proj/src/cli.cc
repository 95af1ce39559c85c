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

#include "projlang/cli.h"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "projlang/chunker.h"
#include "projlang/dataset.h"
#include "projlang/embedding.h"
#include "projlang/grammar.h"
#include "projlang/lsh.h"
#include "projlang/projection.h"

namespace projlang::cli {

namespace {

using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stream for a path, with "-" meaning the given standard stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path);
    in = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::unique_ptr<EmbeddingProvider> OpenProvider(const RunConfig& config) {
  return MakeProvider(ParseProviderSpec(config.embeddings, config.seed));
}

ordered_json DiagnosticsJson(const ProjectionDiagnostics& d) {
  ordered_json j;
  j["embed_calls"] = d.embed_calls;
  j["candidates_scored"] = d.candidates_scored;
  j["pruned_hypotheses"] = d.pruned_hypotheses;
  j["steps"] = d.steps;
  j["radius_used"] = d.radius_used;
  j["radius_escalations"] = d.radius_escalations;
  j["zero_norm"] = d.zero_norm;
  return j;
}

// Program field of an eval line: a JSON record's "program", or the raw line.
// Returns nullopt for header records.
std::optional<std::string> ProgramOfLine(const std::string& line) {
  if (!line.empty() && line.front() == '{') {
    nlohmann::json record = nlohmann::json::parse(line);
    if (record.contains("program") && record["program"].is_string()) {
      return record["program"].get<std::string>();
    }
    if (record.contains("version") && !record.contains("input")) {
      return std::nullopt;
    }
    return std::string();  // failed projection
  }
  return line;
}

std::vector<std::string> ReadPrograms(const std::string& path) {
  std::vector<std::string> programs;
  for (const std::string& line : ReadLines(path)) {
    if (line.empty()) continue;
    if (auto p = ProgramOfLine(line)) programs.push_back(std::move(*p));
  }
  return programs;
}

}  // namespace

int CmdGenerate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.grammar_path.empty()) throw UsageError("generate needs --grammar");
  Grammar grammar = LoadGrammar(config.grammar_path);
  std::vector<SyntheticSentence> data = Enumerate(grammar, config.max_depth);
  Output sink(config.out_path, out);
  WriteDataset(*sink, data);
  std::ostream& report = (config.out_path.empty() || config.out_path == "-")
                             ? err
                             : out;
  report << "generated " << data.size() << " sentences\n";
  return 0;
}

int CmdIndex(const RunConfig& config, std::ostream& out, std::ostream&) {
  if (config.synth_path.empty()) throw UsageError("index needs --synth");
  if (config.out_path.empty() || config.out_path == "-") {
    throw UsageError("index needs --out");
  }
  std::vector<SyntheticSentence> data = LoadDataset(config.synth_path);
  std::unique_ptr<EmbeddingProvider> provider = OpenProvider(config);
  LshIndex index = LshIndex::Build(data, *provider, config.bits, config.seed);
  index.Save(config.out_path);
  out << "indexed " << index.entries().size() << " entries in "
      << index.buckets().size() << " buckets\n";
  return 0;
}

int CmdProject(const RunConfig& config, std::ostream& out, std::ostream& err) {
  ProjectionConfig pc;
  pc.mode = ParseMode(config.mode);
  pc.beam_width = config.beam;
  pc.alpha = config.alpha;
  pc.rescore_with_matching = config.alpha > 0.0;
  pc.lsh_radius = config.radius;
  pc.max_depth = config.max_depth;
  pc.np_pruning = !config.no_prune;
  pc.chunk_alignment = !config.no_chunk_align;

  if (pc.mode == ProjectionMode::kLsh && config.index_path.empty()) {
    throw UsageError("--mode lsh requires --index");
  }
  if (pc.mode == ProjectionMode::kHier && config.grammar_path.empty()) {
    throw UsageError("--mode hier requires --grammar");
  }
  if (pc.mode == ProjectionMode::kFlat && config.grammar_path.empty() &&
      config.synth_path.empty()) {
    throw UsageError("--mode flat requires --synth or --grammar");
  }

  std::optional<Grammar> grammar;
  if (!config.grammar_path.empty()) grammar = LoadGrammar(config.grammar_path);
  std::unique_ptr<EmbeddingProvider> provider = OpenProvider(config);

  std::optional<ChunkLexicon> lexicon;
  if (!config.lexicon_path.empty()) {
    lexicon = LoadChunkLexicon(config.lexicon_path);
  }
  if (grammar && grammar->has_np()) {
    ChunkLexicon seeded = SeedLexiconFromGrammar(*grammar, config.max_depth);
    if (lexicon) seeded.Merge(*lexicon);
    lexicon = std::move(seeded);
  }

  std::optional<EmbeddedCorpus> corpus;
  if (pc.mode == ProjectionMode::kFlat && !config.synth_path.empty()) {
    corpus = EmbeddedCorpus::Build(
        LoadDataset(config.synth_path, grammar ? &*grammar : nullptr),
        *provider);
  }
  std::optional<LshIndex> index;
  if (pc.mode == ProjectionMode::kLsh) index = LshIndex::Load(config.index_path);

  Artifacts artifacts;
  artifacts.grammar = grammar ? &*grammar : nullptr;
  artifacts.corpus = corpus ? &*corpus : nullptr;
  artifacts.index = index ? &*index : nullptr;
  artifacts.provider = provider.get();
  artifacts.lexicon = lexicon ? &*lexicon : nullptr;
  Interpreter interpreter(artifacts, pc);

  std::vector<std::string> queries = ReadLines(config.input_path);
  Output sink(config.out_path, out);
  int failures = 0;
  for (const std::string& query : queries) {
    ordered_json record;
    record["input"] = query;
    try {
      Interpretation r = interpreter.Interpret(query);
      record["chosen_text"] = r.result.chosen.text();
      record["program"] = r.program;
      record["distance"] = r.result.distance;
      record["mode"] = ModeName(pc.mode);
      record["alpha"] = pc.alpha;
      record["diagnostics"] = DiagnosticsJson(r.result.diagnostics);
    } catch (const ProjectionError& e) {
      ++failures;
      record["error"] = e.what();
      record["mode"] = ModeName(pc.mode);
      record["alpha"] = pc.alpha;
      record["diagnostics"] = DiagnosticsJson(e.diagnostics());
    }
    *sink << record.dump() << '\n';
  }
  if (failures > 0) {
    err << failures << " of " << queries.size() << " queries failed\n";
    return kExitError;
  }
  return 0;
}

int CmdEval(const RunConfig& config, std::ostream& out, std::ostream&) {
  if (config.pred_path.empty() || config.gold_path.empty()) {
    throw UsageError("eval needs --pred and --gold");
  }
  std::vector<std::string> pred = ReadPrograms(config.pred_path);
  std::vector<std::string> gold = ReadPrograms(config.gold_path);
  if (pred.size() != gold.size()) {
    throw std::runtime_error("prediction count " + std::to_string(pred.size()) +
                             " differs from gold count " +
                             std::to_string(gold.size()));
  }
  if (gold.empty()) throw std::runtime_error("no records to evaluate");
  size_t correct = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (pred[i] == gold[i]) ++correct;
  }
  const double accuracy =
      static_cast<double>(correct) / static_cast<double>(gold.size());
  out << "accuracy " << std::fixed << std::setprecision(4) << accuracy << " ("
      << correct << "/" << gold.size() << ")\n";
  return 0;
}

int Run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.subcommand == "generate") return CmdGenerate(config, out, err);
    if (config.subcommand == "index") return CmdIndex(config, out, err);
    if (config.subcommand == "project") return CmdProject(config, out, err);
    if (config.subcommand == "eval") return CmdEval(config, out, err);
    throw UsageError("unknown subcommand '" + config.subcommand + "'");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  RunConfig config;
  CLI::App app{"Synthetic data generation and projection-based interpretation",
               "projlang"};
  app.require_subcommand(1);

  auto add_embeddings = [&](CLI::App* cmd) {
    cmd->add_option("--embeddings", config.embeddings,
                    "reference[:dim=D,seed=S,synonyms=PATH] | file:PATH | "
                    "service[:ENDPOINT]");
    cmd->add_option("--seed", config.seed, "Seed for every random choice");
  };

  CLI::App* generate = app.add_subcommand("generate", "Enumerate a grammar");
  generate->add_option("--grammar", config.grammar_path)->required();
  generate->add_option("--out", config.out_path);
  generate->add_option("--max-depth", config.max_depth);

  CLI::App* index = app.add_subcommand("index", "Build a SimHash index");
  index->add_option("--synth", config.synth_path)->required();
  index->add_option("--out", config.out_path)->required();
  index->add_option("--bits", config.bits)->check(CLI::Range(0, 64));
  add_embeddings(index);

  CLI::App* project = app.add_subcommand("project", "Interpret utterances");
  project->add_option("--input", config.input_path, "One query per line");
  project->add_option("--out", config.out_path);
  project->add_option("--grammar", config.grammar_path);
  project->add_option("--synth", config.synth_path);
  project->add_option("--index", config.index_path);
  project->add_option("--lexicon", config.lexicon_path);
  project->add_option("--mode", config.mode)
      ->check(CLI::IsMember({"flat", "lsh", "hier"}));
  project->add_option("--beam", config.beam)->check(CLI::PositiveNumber);
  project->add_option("--alpha", config.alpha)->check(CLI::NonNegativeNumber);
  project->add_option("--radius", config.radius)->check(CLI::NonNegativeNumber);
  project->add_option("--max-depth", config.max_depth);
  project->add_flag("--no-prune", config.no_prune);
  project->add_flag("--no-chunk-align", config.no_chunk_align);
  add_embeddings(project);

  CLI::App* eval = app.add_subcommand("eval", "Exact-match program accuracy");
  eval->add_option("--pred", config.pred_path)->required();
  eval->add_option("--gold", config.gold_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e_out;
    int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? 0 : kExitError;
  }
  config.subcommand = app.get_subcommands().front()->get_name();
  return Run(config, out, err);
}

}  // namespace projlang::cli
