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

#include "autotune/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "autotune/features.h"

namespace autotune {

namespace {

void CheckGrid(const Scenario& scenario, const ValueModel& model) {
  if (model.time_grid != scenario.time_grid) {
    throw ContractError("model time grid does not match scenario " + scenario.id);
  }
}

double MinCollisionDistance(const Scenario& scenario, const OccupancyMap& occupancy,
                            const Trajectory& trajectory) {
  double best = kDistanceSentinel;
  for (const auto& p : trajectory.points) {
    best = std::min(best, CollisionDistance(scenario, occupancy, p.t, p.s));
  }
  return best;
}

bool Collides(const OccupancyMap& occupancy, const Trajectory& trajectory) {
  for (int k = 0; k < kNumTimePoints; ++k) {
    if (PointCollides(occupancy, k, trajectory.points[static_cast<size_t>(k)].s)) {
      return true;
    }
  }
  return false;
}

std::string FormatDouble(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

nlohmann::json RateJson(const MetricRate& r) {
  return nlohmann::json{{"rate", r.rate}, {"num", r.num}, {"den", r.den}};
}

}  // namespace

SelectionResult SelectFromCandidates(const Scenario& scenario, const ValueModel& model,
                                     const std::vector<Trajectory>& candidates) {
  CheckGrid(scenario, model);
  if (candidates.empty()) throw ContractError("selection needs at least one candidate");
  OccupancyMap occupancy = ProjectObstacles(scenario);

  SelectionResult result;
  double best_value = -std::numeric_limits<double>::infinity();
  double best_clearance = -1.0;
  int best_clearance_index = -1;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const Trajectory& cand = candidates[i];
    if (Collides(occupancy, cand)) {
      double clearance = MinCollisionDistance(scenario, occupancy, cand);
      if (clearance > best_clearance) {
        best_clearance = clearance;
        best_clearance_index = static_cast<int>(i);
      }
      continue;
    }
    double v = Value(model, NormalizeBlock(ExtractBlock(scenario, occupancy, cand), model.norm));
    // Strict > keeps the first (smallest-index) candidate on ties.
    if (v > best_value) {
      best_value = v;
      result.candidate_index = static_cast<int>(i);
    }
  }

  if (result.candidate_index >= 0) {
    result.trajectory = candidates[static_cast<size_t>(result.candidate_index)];
    result.value = best_value;
    result.all_colliding = false;
    result.min_collision_distance = MinCollisionDistance(
        scenario, occupancy, result.trajectory);
  } else {
    result.candidate_index = best_clearance_index;
    result.trajectory = candidates[static_cast<size_t>(best_clearance_index)];
    result.value = Value(model, NormalizeBlock(
                                    ExtractBlock(scenario, occupancy, result.trajectory),
                                    model.norm));
    result.all_colliding = true;
    result.min_collision_distance = best_clearance;
  }
  result.trajectory.provenance = Provenance::kSelected;
  return result;
}

SelectionResult SelectTrajectory(const Scenario& scenario, const ValueModel& model,
                                 const SamplerConfig& sampler_config) {
  return SelectFromCandidates(scenario, model, SampleTrajectories(scenario, sampler_config));
}

void MetricAccumulator::Add(const Scenario& scenario, const Trajectory& trajectory) {
  for (int k = 0; k < kNumTimePoints; ++k) {
    const auto& p = trajectory.points[static_cast<size_t>(k)];
    double vlim = scenario.path.SpeedLimitAt(p.s);
    double kappa = scenario.path.CurvatureAt(p.s);
    double lat_accel = kappa * p.v * p.v;
    double lat_jerk = scenario.path.CurvatureSlopeAt(p.s) * p.v * p.v * p.v +
                      2.0 * kappa * p.v * p.a;
    ++points_;
    if (p.v <= vlim + kSpeedLimitTol) ++speed_ok_;
    if (std::abs(p.a) < kAccelBound) ++accel_s_ok_;
    if (std::abs(lat_accel) < kAccelBound) ++accel_l_ok_;
    if (std::abs(p.j) < kJerkBound) ++jerk_s_ok_;
    if (std::abs(lat_jerk) < kJerkBound) ++jerk_l_ok_;
  }
}

void MetricAccumulator::AddScenarioRow(MetricReport::ScenarioRow row) {
  ++scenarios_;
  if (row.collision_free) ++collision_free_;
  rows_.push_back(std::move(row));
}

void MetricAccumulator::SetExpertRank(RankStats stats) { rank_ = stats; }

MetricReport MetricAccumulator::Report() const {
  auto rate = [](int64_t num, int64_t den) {
    return MetricRate{den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0,
                      num, den};
  };
  MetricReport report;
  report.collision_free = rate(collision_free_, scenarios_);
  report.speed_under_limit = rate(speed_ok_, points_);
  report.accel_station_ok = rate(accel_s_ok_, points_);
  report.accel_lateral_ok = rate(accel_l_ok_, points_);
  report.jerk_station_ok = rate(jerk_s_ok_, points_);
  report.jerk_lateral_ok = rate(jerk_l_ok_, points_);
  report.expert_rank = rank_;
  report.per_scenario = rows_;
  return report;
}

MetricReport EvaluateSuite(const std::vector<Scenario>& suite, const ValueModel& model,
                           const SamplerConfig& sampler_config) {
  if (suite.empty()) throw ContractError("evaluation needs a non-empty suite");
  for (const auto& sc : suite) CheckGrid(sc, model);

  MetricAccumulator acc;
  for (const auto& scenario : suite) {
    SelectionResult sel = SelectTrajectory(scenario, model, sampler_config);
    OccupancyMap occupancy = ProjectObstacles(scenario);
    acc.Add(scenario, sel.trajectory);
    MetricReport::ScenarioRow row;
    row.id = scenario.id;
    row.collision_free = !Collides(occupancy, sel.trajectory);
    row.all_colliding = sel.all_colliding;
    row.selected_index = sel.candidate_index;
    row.selected_value = sel.value;
    acc.AddScenarioRow(std::move(row));
  }
  return acc.Report();
}

RankStats ExpertRankWith(const BlockScorer& scorer, const std::vector<Frame>& frames) {
  if (frames.empty()) throw ContractError("expert rank needs a non-empty holdout");
  std::vector<double> percentiles;
  percentiles.reserve(frames.size());
  int top = 0;
  for (const auto& frame : frames) {
    double expert_value = scorer(frame.expert);
    std::vector<double> values;
    values.reserve(frame.samples.size());
    for (const auto& sample : frame.samples) values.push_back(scorer(sample));
    double pct = RankPercentile(expert_value, values);
    percentiles.push_back(pct);
    if (pct >= 90.0) ++top;
  }
  std::sort(percentiles.begin(), percentiles.end());
  size_t n = percentiles.size();
  double median = (n % 2 == 1) ? percentiles[n / 2]
                               : 0.5 * (percentiles[n / 2 - 1] + percentiles[n / 2]);
  RankStats stats;
  stats.top_decile_rate = static_cast<double>(top) / static_cast<double>(n);
  stats.median_percentile = median;
  stats.num_frames = static_cast<int>(n);
  return stats;
}

RankStats ExpertRank(const ValueModel& model, const std::vector<Frame>& frames) {
  return ExpertRankWith([&model](const FeatureBlock& b) { return Value(model, b); },
                        frames);
}

namespace {

nlohmann::json ReportJson(const MetricReport& report, const std::string& model_name) {
  nlohmann::json j{{"format_version", 1},
                   {"model", model_name},
                   {"metrics",
                    {{"collision_free", RateJson(report.collision_free)},
                     {"speed_under_limit", RateJson(report.speed_under_limit)},
                     {"accel_station_ok", RateJson(report.accel_station_ok)},
                     {"accel_lateral_ok", RateJson(report.accel_lateral_ok)},
                     {"jerk_station_ok", RateJson(report.jerk_station_ok)},
                     {"jerk_lateral_ok", RateJson(report.jerk_lateral_ok)}}}};
  if (report.expert_rank.has_value()) {
    j["expert_rank"] = {{"top_decile_rate", report.expert_rank->top_decile_rate},
                        {"median_percentile", report.expert_rank->median_percentile},
                        {"num_frames", report.expert_rank->num_frames}};
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.per_scenario) {
    rows.push_back({{"id", row.id},
                    {"collision_free", row.collision_free},
                    {"all_colliding", row.all_colliding},
                    {"selected_index", row.selected_index},
                    {"selected_value", row.selected_value}});
  }
  j["per_scenario"] = std::move(rows);
  return j;
}

struct MetricRowView {
  const char* name;
  const MetricRate* rate;
};

std::vector<MetricRowView> MetricRows(const MetricReport& r) {
  return {{"collision_free", &r.collision_free},
          {"speed_under_limit", &r.speed_under_limit},
          {"accel_station_ok", &r.accel_station_ok},
          {"accel_lateral_ok", &r.accel_lateral_ok},
          {"jerk_station_ok", &r.jerk_station_ok},
          {"jerk_lateral_ok", &r.jerk_lateral_ok}};
}

}  // namespace

void WriteReportJson(const MetricReport& report, const std::string& model_name,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << ReportJson(report, model_name).dump(1) << "\n";
}

void WriteReportCsv(const MetricReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << "metric,rate,num,den\n";
  for (const auto& row : MetricRows(report)) {
    out << row.name << "," << FormatDouble(row.rate->rate) << "," << row.rate->num << ","
        << row.rate->den << "\n";
  }
  if (report.expert_rank.has_value()) {
    out << "expert_top_decile_rate," << FormatDouble(report.expert_rank->top_decile_rate)
        << "," << report.expert_rank->num_frames << "," << report.expert_rank->num_frames
        << "\n";
    out << "expert_median_percentile,"
        << FormatDouble(report.expert_rank->median_percentile) << ","
        << report.expert_rank->num_frames << "," << report.expert_rank->num_frames << "\n";
  }
}

void WriteComparisonCsv(const MetricReport& report_a, const std::string& name_a,
                        const MetricReport& report_b, const std::string& name_b,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << "metric," << name_a << "," << name_b << "\n";
  auto rows_a = MetricRows(report_a);
  auto rows_b = MetricRows(report_b);
  for (size_t i = 0; i < rows_a.size(); ++i) {
    out << rows_a[i].name << "," << FormatDouble(rows_a[i].rate->rate) << ","
        << FormatDouble(rows_b[i].rate->rate) << "\n";
  }
  if (report_a.expert_rank.has_value() && report_b.expert_rank.has_value()) {
    out << "expert_top_decile_rate," << FormatDouble(report_a.expert_rank->top_decile_rate)
        << "," << FormatDouble(report_b.expert_rank->top_decile_rate) << "\n";
  }
}

}  // namespace autotune
