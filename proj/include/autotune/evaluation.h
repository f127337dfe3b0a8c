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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "autotune/sampler.h"
#include "autotune/scenario.h"
#include "autotune/training.h"
#include "autotune/valuenet.h"

namespace autotune {

// Trajectory-smoothness bounds scored by the metric harness.
inline constexpr double kAccelBound = 4.0;     // m/s^2
inline constexpr double kJerkBound = 6.0;      // m/s^3
inline constexpr double kSpeedLimitTol = 1e-6; // m/s grace at the limit

struct SelectionResult {
  Trajectory trajectory;
  int candidate_index = -1;
  double value = 0.0;
  // No collision-free candidate existed; the returned trajectory is the
  // one with the largest minimum collision distance.
  bool all_colliding = false;
  double min_collision_distance = 0.0;
};

// Ranks fixed candidates by learned value after a hard feasibility
// filter; ties break toward the smaller candidate index. Raw features
// are normalized with the model's own table.
SelectionResult SelectFromCandidates(const Scenario& scenario, const ValueModel& model,
                                     const std::vector<Trajectory>& candidates);

// Samples candidates with the shared generator, then selects.
SelectionResult SelectTrajectory(const Scenario& scenario, const ValueModel& model,
                                 const SamplerConfig& sampler_config);

struct MetricRate {
  double rate = 0.0;
  int64_t num = 0;
  int64_t den = 0;
};

struct RankStats {
  double top_decile_rate = 0.0;
  double median_percentile = 0.0;
  int num_frames = 0;
};

// Suite-level rates: collision_free is per scenario, the rest are per
// trajectory point (fraction of all 18 * |suite| points inside bounds).
// Denominators are recorded so either reading can be recomputed.
struct MetricReport {
  MetricRate collision_free;
  MetricRate speed_under_limit;
  MetricRate accel_station_ok;
  MetricRate accel_lateral_ok;
  MetricRate jerk_station_ok;
  MetricRate jerk_lateral_ok;
  std::optional<RankStats> expert_rank;

  struct ScenarioRow {
    std::string id;
    bool collision_free = false;
    bool all_colliding = false;
    int selected_index = -1;
    double selected_value = 0.0;
  };
  std::vector<ScenarioRow> per_scenario;
};

// Point-level accumulator; exposed so constructed trajectories can be
// scored directly in tests.
class MetricAccumulator {
 public:
  void Add(const Scenario& scenario, const Trajectory& trajectory);
  void AddScenarioRow(MetricReport::ScenarioRow row);
  void SetExpertRank(RankStats stats);
  MetricReport Report() const;

 private:
  int64_t scenarios_ = 0;
  int64_t collision_free_ = 0;
  int64_t points_ = 0;
  int64_t speed_ok_ = 0;
  int64_t accel_s_ok_ = 0;
  int64_t accel_l_ok_ = 0;
  int64_t jerk_s_ok_ = 0;
  int64_t jerk_l_ok_ = 0;
  std::optional<RankStats> rank_;
  std::vector<MetricReport::ScenarioRow> rows_;
};

// Runs the selector on every scenario and aggregates rates. Deterministic
// per (model, sampler seed); scenario order does not change the rates.
MetricReport EvaluateSuite(const std::vector<Scenario>& suite, const ValueModel& model,
                           const SamplerConfig& sampler_config);

// Percentile of the expert's value among {expert} union samples per
// frame, via any block scorer. Frames must not be empty.
using BlockScorer = std::function<double(const FeatureBlock&)>;
RankStats ExpertRankWith(const BlockScorer& scorer, const std::vector<Frame>& frames);
RankStats ExpertRank(const ValueModel& model, const std::vector<Frame>& frames);

void WriteReportJson(const MetricReport& report, const std::string& model_name,
                     const std::string& path);
void WriteReportCsv(const MetricReport& report, const std::string& path);
// Two-column layout with model names as headers.
void WriteComparisonCsv(const MetricReport& report_a, const std::string& name_a,
                        const MetricReport& report_b, const std::string& name_b,
                        const std::string& path);

}  // namespace autotune
