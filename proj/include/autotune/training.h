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

#include <map>
#include <string>
#include <vector>

#include "autotune/frames.h"
#include "autotune/scenario.h"
#include "autotune/valuenet.h"

namespace autotune {

enum class OptimizerKind { kSgd, kAdam, kRmsProp };

std::string ToString(OptimizerKind kind);
OptimizerKind OptimizerKindFromString(const std::string& s);

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 0.01;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  int batch_frames = 8;
  // The leak hands dominated pairs a small credit, so the raw objective
  // is unbounded below under parameter scaling; decay and clipping keep
  // the descent well posed.
  double weight_decay = 1e-4;
  double grad_clip = 10.0;
  double leak = 0.05;
  uint64_t seed = 0;

  void Validate() const;
};

nlohmann::json ToJson(const TrainConfig& config);
TrainConfig TrainConfigFromJson(const nlohmann::json& j);

// One training record with features already normalized by the model's
// table: the expert block plus its query of sampled sibling blocks.
struct Frame {
  std::string scenario_id;
  FeatureBlock expert;
  std::vector<FeatureBlock> samples;
};

// Rank loss kernel: identity on positive margins, leak-scaled on
// negative ones.
inline double LeakyLoss(double y, double leak) { return y >= 0.0 ? y : leak * y; }

// Mean over samples of L(V(sample) - V(expert)); lower is better. A
// sample outranking the expert costs full slope, a dominated sample earns
// only the small leak credit.
double PairwiseLoss(const ValueModel& model, const Frame& frame, double leak);

// Pooled discriminator objective: treats sigmoid(V) as P(human) with the
// expert labeled 1 and every sample 0, binary cross entropy over all
// blocks pooled across frames. Deliberately blind to which scenario a
// block came from.
double PooledBceLoss(const ValueModel& model, const std::vector<Frame>& frames);

// Mid-rank percentile of the expert among {expert} union samples; all
// values tied yields 50.
double RankPercentile(double expert_value, const std::vector<double>& sample_values);

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double expert_top_decile_rate = 0.0;
  double wall_time_s = 0.0;
};

struct TrainReport {
  std::string method;
  int frames_used = 0;
  std::vector<EpochStats> epochs;
};

void WriteTrainReportCsv(const TrainReport& report, const std::string& path);

// Minibatch gradient descent on the mean pairwise loss plus weight decay.
// Both branches of every pair are scored by the same model instance each
// step; minibatches are whole frames, never loose pairs, so every update
// stays conditioned on its scenario. Fixed seed gives a bit-identical
// model. A non-finite loss aborts with the offending frame id.
ValueModel TrainRcIrl(const std::vector<Frame>& frames, const TrainConfig& config,
                      const std::vector<double>& time_grid, const NormTable& norm,
                      TrainReport* report = nullptr);

// Same optimizer machinery and model family on the pooled cross-entropy
// objective, so the comparison isolates the loss/conditioning difference.
ValueModel TrainGanBaseline(const std::vector<Frame>& frames, const TrainConfig& config,
                            const std::vector<double>& time_grid, const NormTable& norm,
                            TrainReport* report = nullptr);

struct IngestReport {
  int kept = 0;
  int dropped = 0;
  int warnings = 0;
};

// Builds normalized training frames from on-disk records: validates the
// time grid against the owning scenario, recomputes missing feature
// blocks, normalizes, and drops frames whose expert speed is constant
// while the scenario holds no obstacles.
std::vector<Frame> BuildFrames(const std::vector<FrameRecord>& records,
                               const std::map<std::string, const Scenario*>& suite,
                               const NormTable& norm, IngestReport* report,
                               const std::string& split_filter = "");

// Convenience wrapper: read a JSONL frame file and build frames for one
// split ("" keeps every record).
std::vector<Frame> IngestFrames(const std::string& path,
                                const std::vector<Scenario>& suite,
                                const NormTable& norm, IngestReport* report,
                                const std::string& split_filter = "");

std::map<std::string, const Scenario*> IndexSuite(const std::vector<Scenario>& suite);

}  // namespace autotune
