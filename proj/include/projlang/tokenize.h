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

#ifndef PROJLANG_TOKENIZE_H_
#define PROJLANG_TOKENIZE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace projlang {

using Tokens = std::vector<std::string>;

// Splits on whitespace, lowercases ASCII letters, and emits every ASCII
// punctuation character as a standalone token.
Tokens Tokenize(std::string_view text);

std::string JoinTokens(std::span<const std::string> tokens);

}  // namespace projlang

#endif  // PROJLANG_TOKENIZE_H_
