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

#ifndef PROJLANG_RANDOM_H_
#define PROJLANG_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace projlang {

// 64-bit FNV-1a over raw bytes.
uint64_t Fnv1a64(std::string_view bytes, uint64_t basis = 0xcbf29ce484222325ULL);

// Combines two 64-bit values into a well-mixed seed (splitmix64 finalizer).
uint64_t MixSeed(uint64_t a, uint64_t b);

// Standard-normal sampler on top of mt19937_64 using the Box-Muller
// transform. std::normal_distribution is implementation-defined, so vectors
// drawn with it would differ across standard libraries; this one does not.
class NormalSampler {
 public:
  explicit NormalSampler(uint64_t seed) : engine_(seed) {}

  double Next();

 private:
  double Uniform();  // [0, 1), 53 bits

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace projlang

#endif  // PROJLANG_RANDOM_H_
