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

#include "autotune/training.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>

#include "autotune/rng.h"

namespace autotune {

std::string ToString(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kSgd: return "sgd";
    case OptimizerKind::kAdam: return "adam";
    case OptimizerKind::kRmsProp: return "rmsprop";
  }
  throw ContractError("unknown optimizer");
}

OptimizerKind OptimizerKindFromString(const std::string& s) {
  if (s == "sgd") return OptimizerKind::kSgd;
  if (s == "adam") return OptimizerKind::kAdam;
  if (s == "rmsprop") return OptimizerKind::kRmsProp;
  throw ParseError("unknown optimizer: " + s);
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw ContractError("training needs at least one epoch");
  // Zero is allowed so the documented no-op-step property is testable.
  if (!(learning_rate >= 0.0)) throw ContractError("learning rate must be non-negative");
  if (batch_frames < 1) throw ContractError("batch size must be at least one frame");
  if (!(weight_decay >= 0.0)) throw ContractError("weight decay must be non-negative");
  if (!(grad_clip > 0.0)) throw ContractError("gradient clip must be positive");
  if (!(leak > 0.0 && leak < 1.0)) throw ContractError("leak rate must lie in (0, 1)");
}

nlohmann::json ToJson(const TrainConfig& c) {
  return nlohmann::json{{"epochs", c.epochs},
                        {"learning_rate", c.learning_rate},
                        {"optimizer", ToString(c.optimizer)},
                        {"batch_frames", c.batch_frames},
                        {"weight_decay", c.weight_decay},
                        {"grad_clip", c.grad_clip},
                        {"leak", c.leak},
                        {"seed", c.seed}};
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  TrainConfig c;
  try {
    c.epochs = j.value("epochs", c.epochs);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    if (j.contains("optimizer")) {
      c.optimizer = OptimizerKindFromString(j.at("optimizer").get<std::string>());
    }
    c.batch_frames = j.value("batch_frames", c.batch_frames);
    c.weight_decay = j.value("weight_decay", c.weight_decay);
    c.grad_clip = j.value("grad_clip", c.grad_clip);
    c.leak = j.value("leak", c.leak);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad training config: ") + e.what());
  }
  c.Validate();
  return c;
}

double PairwiseLoss(const ValueModel& model, const Frame& frame, double leak) {
  if (frame.samples.empty()) {
    throw ContractError("frame must carry at least one sample: " + frame.scenario_id);
  }
  double expert_value = Value(model, frame.expert);
  double sum = 0.0;
  for (const auto& sample : frame.samples) {
    sum += LeakyLoss(Value(model, sample) - expert_value, leak);
  }
  return sum / static_cast<double>(frame.samples.size());
}

namespace {

// Numerically stable binary cross entropy of label y against logit v.
inline double StableBce(double v, double y) {
  return std::max(v, 0.0) - y * v + std::log1p(std::exp(-std::abs(v)));
}

inline double Sigmoid(double v) {
  return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
}

}  // namespace

double PooledBceLoss(const ValueModel& model, const std::vector<Frame>& frames) {
  double sum = 0.0;
  size_t blocks = 0;
  for (const auto& frame : frames) {
    sum += StableBce(Value(model, frame.expert), 1.0);
    ++blocks;
    for (const auto& sample : frame.samples) {
      sum += StableBce(Value(model, sample), 0.0);
      ++blocks;
    }
  }
  if (blocks == 0) throw ContractError("pooled loss needs at least one block");
  return sum / static_cast<double>(blocks);
}

double RankPercentile(double expert_value, const std::vector<double>& sample_values) {
  if (sample_values.empty()) throw ContractError("rank needs at least one sample");
  int below = 0;
  int ties = 0;
  for (double v : sample_values) {
    if (v < expert_value) ++below;
    else if (v == expert_value) ++ties;
  }
  return 100.0 * (static_cast<double>(below) + 0.5 * static_cast<double>(ties)) /
         static_cast<double>(sample_values.size());
}

namespace {

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::kSgd;
  double lr = 0.0;
  ParamVector m{};  // first moment / RMS accumulator
  ParamVector v{};  // second moment (adam)
  int64_t step = 0;

  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kRho = 0.9;
  static constexpr double kEps = 1e-8;

  void Apply(ParamVector& params, const ParamVector& grad) {
    ++step;
    switch (kind) {
      case OptimizerKind::kSgd:
        for (int i = 0; i < kParamCount; ++i) {
          params[static_cast<size_t>(i)] -= lr * grad[static_cast<size_t>(i)];
        }
        break;
      case OptimizerKind::kAdam: {
        double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
        double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
        for (int i = 0; i < kParamCount; ++i) {
          size_t u = static_cast<size_t>(i);
          m[u] = kBeta1 * m[u] + (1.0 - kBeta1) * grad[u];
          v[u] = kBeta2 * v[u] + (1.0 - kBeta2) * grad[u] * grad[u];
          params[u] -= lr * (m[u] / bc1) / (std::sqrt(v[u] / bc2) + kEps);
        }
        break;
      }
      case OptimizerKind::kRmsProp:
        for (int i = 0; i < kParamCount; ++i) {
          size_t u = static_cast<size_t>(i);
          m[u] = kRho * m[u] + (1.0 - kRho) * grad[u] * grad[u];
          params[u] -= lr * grad[u] / (std::sqrt(m[u]) + kEps);
        }
        break;
    }
  }
};

// Per-frame loss gradient callback; returns the frame loss and adds its
// parameter gradient (already divided by whatever the objective demands)
// into `acc`.
using FrameGrad = double (*)(const ValueModel&, const Frame&, double leak,
                             ParamVector& scratch, ParamVector& acc);

double RcIrlFrameGrad(const ValueModel& model, const Frame& frame, double leak,
                      ParamVector& scratch, ParamVector& acc) {
  ParamVector expert_grad;
  double expert_value = ValueWithGradient(model, frame.expert, expert_grad);
  double inv_n = 1.0 / static_cast<double>(frame.samples.size());
  double loss = 0.0;
  double expert_coeff = 0.0;
  for (const auto& sample : frame.samples) {
    double sample_value = ValueWithGradient(model, sample, scratch);
    double y = sample_value - expert_value;
    loss += LeakyLoss(y, leak);
    double slope = y >= 0.0 ? 1.0 : leak;  // dL/dy
    double c = slope * inv_n;
    for (int i = 0; i < kParamCount; ++i) {
      acc[static_cast<size_t>(i)] += c * scratch[static_cast<size_t>(i)];
    }
    expert_coeff -= c;
  }
  for (int i = 0; i < kParamCount; ++i) {
    acc[static_cast<size_t>(i)] += expert_coeff * expert_grad[static_cast<size_t>(i)];
  }
  return loss * inv_n;
}

double GanFrameGrad(const ValueModel& model, const Frame& frame, double /*leak*/,
                    ParamVector& scratch, ParamVector& acc) {
  // Mean BCE over the frame's blocks; dBCE/dV = sigmoid(V) - label.
  double inv_n = 1.0 / static_cast<double>(1 + frame.samples.size());
  double loss = 0.0;
  auto add_block = [&](const FeatureBlock& block, double label) {
    double v = ValueWithGradient(model, block, scratch);
    loss += StableBce(v, label);
    double c = (Sigmoid(v) - label) * inv_n;
    for (int i = 0; i < kParamCount; ++i) {
      acc[static_cast<size_t>(i)] += c * scratch[static_cast<size_t>(i)];
    }
  };
  add_block(frame.expert, 1.0);
  for (const auto& sample : frame.samples) add_block(sample, 0.0);
  return loss * inv_n;
}

double TopDecileRate(const ValueModel& model, const std::vector<Frame>& frames) {
  int top = 0;
  for (const auto& frame : frames) {
    double expert_value = Value(model, frame.expert);
    std::vector<double> values;
    values.reserve(frame.samples.size());
    for (const auto& sample : frame.samples) values.push_back(Value(model, sample));
    if (RankPercentile(expert_value, values) >= 90.0) ++top;
  }
  return frames.empty() ? 0.0 : static_cast<double>(top) / static_cast<double>(frames.size());
}

ValueModel TrainCommon(const std::vector<Frame>& frames, const TrainConfig& config,
                       const std::vector<double>& time_grid, const NormTable& norm,
                       FrameGrad frame_grad, const char* method, TrainReport* report) {
  config.Validate();
  if (frames.empty()) throw ContractError("training needs a non-empty frame set");

  ValueModel model = ValueModel::Init(config.seed, time_grid, norm);
  ParamVector params = PackParams(model);

  OptimizerState opt;
  opt.kind = config.optimizer;
  opt.lr = config.learning_rate;

  Rng shuffle_rng(SubstreamSeed(config.seed, "shuffle"));
  std::vector<size_t> order(frames.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  if (report != nullptr) {
    report->method = method;
    report->frames_used = static_cast<int>(frames.size());
    report->epochs.clear();
  }

  ParamVector scratch{};
  ParamVector acc{};
  auto t0 = std::chrono::steady_clock::now();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.Shuffle(order);
    double epoch_loss = 0.0;
    size_t cursor = 0;
    while (cursor < order.size()) {
      size_t batch_end = std::min(order.size(), cursor + static_cast<size_t>(config.batch_frames));
      acc.fill(0.0);
      double inv_batch = 1.0 / static_cast<double>(batch_end - cursor);
      for (size_t b = cursor; b < batch_end; ++b) {
        const Frame& frame = frames[order[b]];
        double loss = frame_grad(model, frame, config.leak, scratch, acc);
        if (!std::isfinite(loss)) {
          throw NumericError("non-finite loss on frame " + frame.scenario_id);
        }
        epoch_loss += loss;
      }
      // Mean over the batch; clip the pure loss gradient.
      double norm_sq = 0.0;
      for (int i = 0; i < kParamCount; ++i) {
        size_t u = static_cast<size_t>(i);
        acc[u] *= inv_batch;
        norm_sq += acc[u] * acc[u];
      }
      double gnorm = std::sqrt(norm_sq);
      if (gnorm > config.grad_clip) {
        double scale = config.grad_clip / gnorm;
        for (double& g : acc) g *= scale;
      }
      // Decay is decoupled from the adaptive rescaling so it actually
      // bounds the parameter scale (the leak credit grows margins
      // without limit otherwise).
      if (config.weight_decay > 0.0) {
        double keep = 1.0 - config.learning_rate * config.weight_decay;
        for (double& p : params) p *= keep;
      }
      opt.Apply(params, acc);
      UnpackParams(params, model);
      cursor = batch_end;
    }
    if (report != nullptr) {
      EpochStats stats;
      stats.epoch = epoch;
      stats.mean_loss = epoch_loss / static_cast<double>(frames.size());
      stats.expert_top_decile_rate = TopDecileRate(model, frames);
      stats.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      report->epochs.push_back(stats);
    }
  }
  model.Validate();
  return model;
}

std::string FormatDouble(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

ValueModel TrainRcIrl(const std::vector<Frame>& frames, const TrainConfig& config,
                      const std::vector<double>& time_grid, const NormTable& norm,
                      TrainReport* report) {
  return TrainCommon(frames, config, time_grid, norm, RcIrlFrameGrad, "rcirl", report);
}

ValueModel TrainGanBaseline(const std::vector<Frame>& frames, const TrainConfig& config,
                            const std::vector<double>& time_grid, const NormTable& norm,
                            TrainReport* report) {
  return TrainCommon(frames, config, time_grid, norm, GanFrameGrad, "gan", report);
}

void WriteTrainReportCsv(const TrainReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << "epoch,mean_loss,expert_top_decile_rate,wall_time_s\n";
  for (const auto& e : report.epochs) {
    out << e.epoch << "," << FormatDouble(e.mean_loss) << ","
        << FormatDouble(e.expert_top_decile_rate) << "," << FormatDouble(e.wall_time_s)
        << "\n";
  }
}

std::map<std::string, const Scenario*> IndexSuite(const std::vector<Scenario>& suite) {
  std::map<std::string, const Scenario*> index;
  for (const auto& sc : suite) {
    if (!index.emplace(sc.id, &sc).second) {
      throw ContractError("duplicate scenario id in suite: " + sc.id);
    }
  }
  return index;
}

namespace {

bool ConstantSpeed(const Trajectory& traj) {
  double v0 = traj.points.front().v;
  for (const auto& p : traj.points) {
    if (std::abs(p.v - v0) > 1e-9) return false;
  }
  return true;
}

}  // namespace

std::vector<Frame> BuildFrames(const std::vector<FrameRecord>& records,
                               const std::map<std::string, const Scenario*>& suite,
                               const NormTable& norm, IngestReport* report,
                               const std::string& split_filter) {
  IngestReport local;
  std::vector<Frame> frames;
  for (const auto& record : records) {
    if (!split_filter.empty() && record.split != split_filter) continue;
    auto it = suite.find(record.scenario_id);
    if (it == suite.end()) {
      throw ContractError("frame references unknown scenario " + record.scenario_id);
    }
    const Scenario& scenario = *it->second;
    if (record.time_grid != scenario.time_grid) {
      throw ContractError("frame time grid does not match scenario " + record.scenario_id);
    }
    record.expert.Validate(scenario);
    for (const auto& s : record.samples) s.Validate(scenario);
    if (record.sample_features.has_value() &&
        record.sample_features->size() != record.samples.size()) {
      throw ContractError("sample feature count mismatch in frame " + record.scenario_id);
    }

    // Filter mirrored from the data pipeline: constant expert speed with
    // no obstacles carries no ranking signal.
    if (scenario.obstacles.empty() && ConstantSpeed(record.expert)) {
      ++local.dropped;
      continue;
    }

    OccupancyMap occupancy = ProjectObstacles(scenario);
    Frame frame;
    frame.scenario_id = record.scenario_id;
    FeatureBlock expert_raw = record.expert_features.has_value()
                                  ? *record.expert_features
                                  : ExtractBlock(scenario, occupancy, record.expert);
    frame.expert = NormalizeBlock(expert_raw, norm);
    frame.samples.reserve(record.samples.size());
    for (size_t i = 0; i < record.samples.size(); ++i) {
      FeatureBlock raw = record.sample_features.has_value()
                             ? (*record.sample_features)[i]
                             : ExtractBlock(scenario, occupancy, record.samples[i]);
      frame.samples.push_back(NormalizeBlock(raw, norm));
    }
    frames.push_back(std::move(frame));
    ++local.kept;
  }
  if (records.empty()) ++local.warnings;
  if (report != nullptr) *report = local;
  return frames;
}

std::vector<Frame> IngestFrames(const std::string& path, const std::vector<Scenario>& suite,
                                const NormTable& norm, IngestReport* report,
                                const std::string& split_filter) {
  std::vector<FrameRecord> records = ReadFrames(path);
  return BuildFrames(records, IndexSuite(suite), norm, report, split_filter);
}

}  // namespace autotune
