/******************************************************************************
 * Copyright 2026 The Autotune Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace autotune {

// Derives an independent stream seed from (base, name, index). Every piece
// of randomness in the pipeline flows from one command seed through named
// sub-streams, so components can be re-run in isolation and parallel runs
// match serial ones bit for bit.
uint64_t SubstreamSeed(uint64_t base, std::string_view name, uint64_t index = 0);

// Deterministic RNG. mt19937_64 output is pinned by the standard; all
// distributions are implemented here because the std ones are
// implementation-defined and would break cross-toolchain reproducibility.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64();
  double Uniform();                        // [0, 1)
  double Uniform(double lo, double hi);    // [lo, hi)
  int UniformInt(int lo, int hi);          // inclusive on both ends
  double Cauchy();                         // standard Cauchy

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      int j = UniformInt(0, i);
      std::swap(v[i], v[static_cast<size_t>(j)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace autotune
