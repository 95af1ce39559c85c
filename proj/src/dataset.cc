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

#include "projlang/dataset.h"

#include <fstream>
#include <istream>
#include <ostream>

namespace projlang {

using nlohmann::ordered_json;

void WriteDataset(std::ostream& out, std::span<const SyntheticSentence> data) {
  out << ordered_json{{"version", kDatasetVersion}}.dump() << '\n';
  for (const SyntheticSentence& s : data) {
    ordered_json record;
    record["text"] = s.text();
    record["program"] = s.program;
    record["derivation"] = s.derivation
                               ? ordered_json::parse(s.derivation->ToNested().dump())
                               : ordered_json(nullptr);
    out << record.dump() << '\n';
  }
}

std::vector<SyntheticSentence> ReadDataset(std::istream& in,
                                           const Grammar* grammar) {
  std::vector<SyntheticSentence> data;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!header) {
      if (!record.contains("version")) {
        throw DatasetError("missing version header");
      }
      if (record["version"] != kDatasetVersion) {
        throw DatasetError("unsupported dataset version " +
                           record["version"].dump());
      }
      header = true;
      continue;
    }
    if (!record.contains("text") || !record.contains("program")) {
      throw DatasetError("line " + std::to_string(line_no) +
                         ": record needs text and program");
    }
    SyntheticSentence s;
    s.tokens = Tokenize(record["text"].get<std::string>());
    s.program = record["program"].get<std::string>();
    if (grammar && record.contains("derivation") &&
        !record["derivation"].is_null()) {
      s.derivation = Derivation::FromNested(*grammar, record["derivation"]);
    }
    data.push_back(std::move(s));
  }
  if (!header) throw DatasetError("empty dataset file");
  return data;
}

void SaveDataset(const std::string& path,
                 std::span<const SyntheticSentence> data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write " + path);
  WriteDataset(out, data);
}

std::vector<SyntheticSentence> LoadDataset(const std::string& path,
                                           const Grammar* grammar) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path);
  return ReadDataset(in, grammar);
}

}  // namespace projlang
