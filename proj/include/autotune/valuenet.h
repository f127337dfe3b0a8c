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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "autotune/features.h"
#include "autotune/scenario.h"

namespace autotune {

inline constexpr int kModelFormatVersion = 1;

// Total trainable parameters: 15*21 + 15 + 15 + 1 + 18.
inline constexpr int kParamCount =
    kNumHidden * kNumFeatures + kNumHidden + kNumHidden + 1 + kNumTimePoints;
static_assert(kParamCount == 364);

// Flat parameter layout (shared by the optimizer, gradients, and the
// finite-difference harness):
//   [0, 315)    w1, row-major (hidden x feature)
//   [315, 330)  b1
//   [330, 345)  w2
//   [345]       b2
//   [346, 364)  gamma
using ParamVector = std::array<double, kParamCount>;

// Per-time reward encoder with shared parameters plus a learnable
// per-time weight vector gamma. The encoder is a 21 -> 15 -> 1 net with
// leaky rectification; the trajectory value is the gamma-weighted sum of
// per-time rewards. Immutable during evaluation; all evaluation entry
// points are pure and thread-safe.
struct ValueModel {
  std::array<std::array<double, kNumFeatures>, kNumHidden> w1{};
  std::array<double, kNumHidden> b1{};
  std::array<double, kNumHidden> w2{};
  double b2 = 0.0;
  std::array<double, kNumTimePoints> gamma{};
  double activation_slope = 0.05;

  std::vector<double> time_grid;  // grid the model was trained for
  NormTable norm;                 // travels with the model so online
                                  // scoring and training cannot disagree

  // Fan-in-scaled symmetric uniform init for the encoder; gamma starts
  // at 1 and is left unconstrained so the time trend is learned from
  // data.
  static ValueModel Init(uint64_t seed, std::vector<double> time_grid,
                         const NormTable& norm);

  void Validate() const;
};

// Reward for one normalized feature row: w2 . act(w1 f + b1) + b2.
double EncodeReward(const ValueModel& model, const FeatureVector& f);

// Trajectory value: sum_k gamma[k] * EncodeReward(row k).
double Value(const ValueModel& model, const FeatureBlock& block);

// Value plus the exact gradient over all parameters. The gradient matches
// central finite differences at step 1e-5 to < 1e-6 relative error per
// component away from rectifier kinks; at a kink the one-sided derivative
// on the positive side is used.
double ValueWithGradient(const ValueModel& model, const FeatureBlock& block,
                         ParamVector& grad);

ParamVector PackParams(const ValueModel& model);
void UnpackParams(const ParamVector& params, ValueModel& model);
double GetParam(const ValueModel& model, int index);
void SetParam(ValueModel& model, int index, double value);

// Distinct load failures, all mapped to malformed-input by the CLI.
class ModelVersionError : public ParseError {
 public:
  using ParseError::ParseError;
};
class ModelDimensionError : public ParseError {
 public:
  using ParseError::ParseError;
};
class ModelValueError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Single-document JSON model file; round trips are bit-exact.
void SaveModel(const ValueModel& model, const std::string& path);
ValueModel LoadModel(const std::string& path);
nlohmann::json ToJson(const ValueModel& model);
ValueModel ValueModelFromJson(const nlohmann::json& j);

}  // namespace autotune
