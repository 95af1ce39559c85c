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

#ifndef PROJLANG_DATASET_H_
#define PROJLANG_DATASET_H_

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "projlang/derivation.h"

namespace projlang {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDatasetVersion = 1;

// Synthetic data files are JSON lines: a {"version": 1} header, then one
// {"text", "program", "derivation"} record per sentence.
void WriteDataset(std::ostream& out, std::span<const SyntheticSentence> data);

// Derivations are rebuilt only when a grammar is supplied.
std::vector<SyntheticSentence> ReadDataset(std::istream& in,
                                           const Grammar* grammar = nullptr);

void SaveDataset(const std::string& path,
                 std::span<const SyntheticSentence> data);
std::vector<SyntheticSentence> LoadDataset(const std::string& path,
                                           const Grammar* grammar = nullptr);

}  // namespace projlang

#endif  // PROJLANG_DATASET_H_
