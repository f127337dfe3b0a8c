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

#include "autotune/rng.h"

#include <cmath>
#include <numbers>

namespace autotune {

namespace {

uint64_t SplitMix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

uint64_t SubstreamSeed(uint64_t base, std::string_view name, uint64_t index) {
  uint64_t state = base ^ Fnv1a(name);
  uint64_t a = SplitMix64(state);
  state ^= index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
  uint64_t b = SplitMix64(state);
  return a ^ (b + 0x9e3779b97f4a7c15ULL);
}

Rng::Rng(uint64_t seed) : gen_(seed) {}

uint64_t Rng::NextU64() { return gen_(); }

double Rng::Uniform() {
  // 53 random mantissa bits -> [0, 1).
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

int Rng::UniformInt(int lo, int hi) {
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return lo + static_cast<int>(x % span);
}

double Rng::Cauchy() {
  // Inverse CDF; Uniform() never returns exactly 1, and u == 0.5 maps to 0.
  double u = Uniform();
  return std::tan(std::numbers::pi * (u - 0.5));
}

}  // namespace autotune
