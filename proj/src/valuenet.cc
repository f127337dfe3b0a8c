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

#include "autotune/valuenet.h"

#include <cmath>
#include <fstream>

#include "autotune/rng.h"

namespace autotune {

namespace {

constexpr int kW1Offset = 0;
constexpr int kB1Offset = kNumHidden * kNumFeatures;
constexpr int kW2Offset = kB1Offset + kNumHidden;
constexpr int kB2Offset = kW2Offset + kNumHidden;
constexpr int kGammaOffset = kB2Offset + 1;

inline double Act(double z, double slope) { return z >= 0.0 ? z : slope * z; }
// Right derivative at the kink.
inline double ActD(double z, double slope) { return z >= 0.0 ? 1.0 : slope; }

void RequireFiniteRow(const FeatureVector& f) {
  for (double x : f) {
    if (!std::isfinite(x)) throw ContractError("feature row must be finite");
  }
}

}  // namespace

ValueModel ValueModel::Init(uint64_t seed, std::vector<double> time_grid,
                            const NormTable& norm_table) {
  ValueModel m;
  Rng rng(SubstreamSeed(seed, "init"));
  double bound1 = 1.0 / std::sqrt(static_cast<double>(kNumFeatures));
  for (auto& row : m.w1) {
    for (double& w : row) w = rng.Uniform(-bound1, bound1);
  }
  m.b1.fill(0.0);
  double bound2 = 1.0 / std::sqrt(static_cast<double>(kNumHidden));
  for (double& w : m.w2) w = rng.Uniform(-bound2, bound2);
  m.b2 = 0.0;
  m.gamma.fill(1.0);
  m.activation_slope = 0.05;
  m.time_grid = std::move(time_grid);
  m.norm = norm_table;
  m.Validate();
  return m;
}

void ValueModel::Validate() const {
  auto check = [](double x) {
    if (!std::isfinite(x)) throw ContractError("model parameter must be finite");
  };
  for (const auto& row : w1) {
    for (double w : row) check(w);
  }
  for (double x : b1) check(x);
  for (double x : w2) check(x);
  check(b2);
  for (double x : gamma) check(x);
  if (!(activation_slope > 0.0 && activation_slope < 1.0)) {
    throw ContractError("activation slope must lie in (0, 1)");
  }
  if (static_cast<int>(time_grid.size()) != kNumTimePoints) {
    throw ContractError("model time grid must hold exactly 18 points");
  }
  norm.Validate();
}

double EncodeReward(const ValueModel& model, const FeatureVector& f) {
  RequireFiniteRow(f);
  double out = model.b2;
  for (int i = 0; i < kNumHidden; ++i) {
    size_t u = static_cast<size_t>(i);
    double z = model.b1[u];
    for (int j = 0; j < kNumFeatures; ++j) {
      z += model.w1[u][static_cast<size_t>(j)] * f[static_cast<size_t>(j)];
    }
    out += model.w2[u] * Act(z, model.activation_slope);
  }
  return out;
}

double Value(const ValueModel& model, const FeatureBlock& block) {
  double value = 0.0;
  for (int k = 0; k < kNumTimePoints; ++k) {
    value += model.gamma[static_cast<size_t>(k)] * EncodeReward(model, block[k]);
  }
  return value;
}

double ValueWithGradient(const ValueModel& model, const FeatureBlock& block,
                         ParamVector& grad) {
  grad.fill(0.0);
  double value = 0.0;
  double gamma_sum = 0.0;
  for (int k = 0; k < kNumTimePoints; ++k) {
    size_t ku = static_cast<size_t>(k);
    const FeatureVector& f = block[k];
    RequireFiniteRow(f);
    double gk = model.gamma[ku];
    double reward = model.b2;
    for (int i = 0; i < kNumHidden; ++i) {
      size_t iu = static_cast<size_t>(i);
      double z = model.b1[iu];
      for (int j = 0; j < kNumFeatures; ++j) {
        z += model.w1[iu][static_cast<size_t>(j)] * f[static_cast<size_t>(j)];
      }
      double h = Act(z, model.activation_slope);
      reward += model.w2[iu] * h;
      // dV/dz_i = gamma_k * w2_i * act'(z_i)
      double dz = gk * model.w2[iu] * ActD(z, model.activation_slope);
      double* w1_grad = &grad[static_cast<size_t>(kW1Offset + i * kNumFeatures)];
      for (int j = 0; j < kNumFeatures; ++j) {
        w1_grad[j] += dz * f[static_cast<size_t>(j)];
      }
      grad[static_cast<size_t>(kB1Offset + i)] += dz;
      grad[static_cast<size_t>(kW2Offset + i)] += gk * h;
    }
    grad[static_cast<size_t>(kGammaOffset + k)] = reward;  // dV/dgamma_k exactly
    gamma_sum += gk;
    value += gk * reward;
  }
  grad[kB2Offset] = gamma_sum;
  return value;
}

ParamVector PackParams(const ValueModel& model) {
  ParamVector p{};
  for (int i = 0; i < kNumHidden; ++i) {
    for (int j = 0; j < kNumFeatures; ++j) {
      p[static_cast<size_t>(kW1Offset + i * kNumFeatures + j)] =
          model.w1[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }
  for (int i = 0; i < kNumHidden; ++i) {
    p[static_cast<size_t>(kB1Offset + i)] = model.b1[static_cast<size_t>(i)];
    p[static_cast<size_t>(kW2Offset + i)] = model.w2[static_cast<size_t>(i)];
  }
  p[kB2Offset] = model.b2;
  for (int k = 0; k < kNumTimePoints; ++k) {
    p[static_cast<size_t>(kGammaOffset + k)] = model.gamma[static_cast<size_t>(k)];
  }
  return p;
}

void UnpackParams(const ParamVector& params, ValueModel& model) {
  for (int i = 0; i < kNumHidden; ++i) {
    for (int j = 0; j < kNumFeatures; ++j) {
      model.w1[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          params[static_cast<size_t>(kW1Offset + i * kNumFeatures + j)];
    }
  }
  for (int i = 0; i < kNumHidden; ++i) {
    model.b1[static_cast<size_t>(i)] = params[static_cast<size_t>(kB1Offset + i)];
    model.w2[static_cast<size_t>(i)] = params[static_cast<size_t>(kW2Offset + i)];
  }
  model.b2 = params[kB2Offset];
  for (int k = 0; k < kNumTimePoints; ++k) {
    model.gamma[static_cast<size_t>(k)] = params[static_cast<size_t>(kGammaOffset + k)];
  }
}

double GetParam(const ValueModel& model, int index) {
  if (index < 0 || index >= kParamCount) throw ContractError("parameter index out of range");
  if (index < kB1Offset) {
    return model.w1[static_cast<size_t>(index / kNumFeatures)]
                   [static_cast<size_t>(index % kNumFeatures)];
  }
  if (index < kW2Offset) return model.b1[static_cast<size_t>(index - kB1Offset)];
  if (index < kB2Offset) return model.w2[static_cast<size_t>(index - kW2Offset)];
  if (index == kB2Offset) return model.b2;
  return model.gamma[static_cast<size_t>(index - kGammaOffset)];
}

void SetParam(ValueModel& model, int index, double value) {
  if (index < 0 || index >= kParamCount) throw ContractError("parameter index out of range");
  if (index < kB1Offset) {
    model.w1[static_cast<size_t>(index / kNumFeatures)]
            [static_cast<size_t>(index % kNumFeatures)] = value;
  } else if (index < kW2Offset) {
    model.b1[static_cast<size_t>(index - kB1Offset)] = value;
  } else if (index < kB2Offset) {
    model.w2[static_cast<size_t>(index - kW2Offset)] = value;
  } else if (index == kB2Offset) {
    model.b2 = value;
  } else {
    model.gamma[static_cast<size_t>(index - kGammaOffset)] = value;
  }
}

nlohmann::json ToJson(const ValueModel& model) {
  nlohmann::json w1 = nlohmann::json::array();
  for (const auto& row : model.w1) {
    w1.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return nlohmann::json{
      {"format_version", kModelFormatVersion},
      {"activation_slope", model.activation_slope},
      {"time_grid", model.time_grid},
      {"norm", ToJson(model.norm)},
      {"w1", std::move(w1)},
      {"b1", std::vector<double>(model.b1.begin(), model.b1.end())},
      {"w2", std::vector<double>(model.w2.begin(), model.w2.end())},
      {"b2", model.b2},
      {"gamma", std::vector<double>(model.gamma.begin(), model.gamma.end())}};
}

ValueModel ValueModelFromJson(const nlohmann::json& j) {
  ValueModel m;
  int version;
  try {
    version = j.at("format_version").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ModelVersionError(std::string("model file missing format_version: ") + e.what());
  }
  if (version != kModelFormatVersion) {
    throw ModelVersionError("unsupported model format version " + std::to_string(version));
  }
  try {
    auto w1 = j.at("w1").get<std::vector<std::vector<double>>>();
    auto b1 = j.at("b1").get<std::vector<double>>();
    auto w2 = j.at("w2").get<std::vector<double>>();
    auto gamma = j.at("gamma").get<std::vector<double>>();
    auto grid = j.at("time_grid").get<std::vector<double>>();
    if (w1.size() != kNumHidden || b1.size() != kNumHidden || w2.size() != kNumHidden ||
        gamma.size() != kNumTimePoints || grid.size() != kNumTimePoints) {
      throw ModelDimensionError("model dimensions do not match the 21x15x18 contract");
    }
    for (const auto& row : w1) {
      if (row.size() != kNumFeatures) {
        throw ModelDimensionError("model w1 row does not hold 21 weights");
      }
    }
    for (int i = 0; i < kNumHidden; ++i) {
      std::copy(w1[static_cast<size_t>(i)].begin(), w1[static_cast<size_t>(i)].end(),
                m.w1[static_cast<size_t>(i)].begin());
    }
    std::copy(b1.begin(), b1.end(), m.b1.begin());
    std::copy(w2.begin(), w2.end(), m.w2.begin());
    std::copy(gamma.begin(), gamma.end(), m.gamma.begin());
    m.b2 = j.at("b2").get<double>();
    m.activation_slope = j.at("activation_slope").get<double>();
    m.time_grid = std::move(grid);
    m.norm = NormTableFromJson(j.at("norm"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad model file: ") + e.what());
  }
  try {
    m.Validate();
  } catch (const ContractError& e) {
    throw ModelValueError(std::string("model file rejected: ") + e.what());
  }
  return m;
}

void SaveModel(const ValueModel& model, const std::string& path) {
  model.Validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << ToJson(model).dump(1) << "\n";
}

ValueModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed model file " + path + ": " + e.what());
  }
  return ValueModelFromJson(j);
}

}  // namespace autotune
