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

#include "autotune/expert.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace autotune {

GroundTruthReward GroundTruthReward::Default() {
  GroundTruthReward gt;
  gt.weights.fill(0.0);
  gt.weights[kChVelocity] = 1.0;       // progress
  gt.weights[kChStation] = 0.25;       // progress
  gt.weights[kChCollisionDist] = 2.5;  // clearance: the expert keeps a
                                       // visible safety margin
  gt.speed_violation_weight = 2.0;
  gt.accel_smooth_weight = 0.0;
  gt.collision_penalty = 1e6;
  gt.decay = 0.95;
  gt.norm = NormTable::Default();
  return gt;
}

void GroundTruthReward::Validate() const {
  norm.Validate();
  bool any = speed_violation_weight != 0.0 || collision_penalty != 0.0 ||
             accel_smooth_weight != 0.0;
  for (double w : weights) {
    if (!std::isfinite(w)) throw ContractError("ground-truth weight must be finite");
    any = any || w != 0.0;
  }
  if (!any) throw ContractError("ground-truth reward needs at least one nonzero weight");
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw ContractError("ground-truth decay must lie in (0, 1]");
  }
}

double GroundTruthReward::Reward(const FeatureVector& raw) const {
  double r = 0.0;
  for (int i = 0; i < kNumFeatures; ++i) {
    size_t u = static_cast<size_t>(i);
    if (weights[u] == 0.0) continue;
    r += weights[u] * (raw[u] - norm.center[u]) / norm.scale[u];
  }
  double violation = std::max(0.0, raw[kChVelocity] - raw[kChSpeedLimit]);
  r -= speed_violation_weight * violation * violation;
  r -= accel_smooth_weight * std::abs(raw[kChAccel]);
  if (raw[kChCollisionDist] <= 0.0) r -= collision_penalty;
  return r;
}

double GroundTruthReward::Value(const FeatureBlock& raw_block) const {
  double value = 0.0;
  double w = 1.0;
  for (int k = 0; k < kNumTimePoints; ++k) {
    value += w * Reward(raw_block[k]);
    w *= decay;
  }
  return value;
}

nlohmann::json ToJson(const GroundTruthReward& gt) {
  return nlohmann::json{
      {"weights", std::vector<double>(gt.weights.begin(), gt.weights.end())},
      {"speed_violation_weight", gt.speed_violation_weight},
      {"accel_smooth_weight", gt.accel_smooth_weight},
      {"collision_penalty", gt.collision_penalty},
      {"decay", gt.decay},
      {"norm", ToJson(gt.norm)}};
}

GroundTruthReward GroundTruthRewardFromJson(const nlohmann::json& j) {
  GroundTruthReward gt;
  try {
    auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != kNumFeatures) {
      throw ParseError("ground-truth reward must hold 21 weights");
    }
    std::copy(w.begin(), w.end(), gt.weights.begin());
    gt.speed_violation_weight = j.value("speed_violation_weight", gt.speed_violation_weight);
    gt.accel_smooth_weight = j.value("accel_smooth_weight", gt.accel_smooth_weight);
    gt.collision_penalty = j.value("collision_penalty", gt.collision_penalty);
    gt.decay = j.value("decay", gt.decay);
    if (j.contains("norm")) gt.norm = NormTableFromJson(j.at("norm"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad ground-truth reward: ") + e.what());
  }
  gt.Validate();
  return gt;
}

void DpResolution::Validate() const {
  if (!(speed_step > 0.0)) throw ContractError("lattice speed step must be positive");
  if (!(max_speed_factor >= 1.0)) {
    throw ContractError("lattice max speed factor must be >= 1");
  }
}

namespace {

struct LatticeSpec {
  double dv = 0.0;       // speed node spacing
  double du = 0.0;       // station node spacing = dv * dt / 2
  double v_max = 0.0;
  int n_speed = 0;       // nodes 0..n_speed inclusive
  int dn_min = 0;        // speed index delta bounds per step
  int dn_max = 0;
  double dt = 0.0;
};

LatticeSpec MakeLattice(const Scenario& scenario, const DpResolution& res,
                        double a_min, double a_max) {
  if (!scenario.UniformGrid()) {
    throw ContractError("lattice planner requires a uniform time grid");
  }
  if (!(a_min <= 0.0 && a_max >= 0.0)) {
    throw ContractError("lattice planner accel bounds must bracket zero");
  }
  LatticeSpec lat;
  lat.dt = scenario.Dt();
  lat.dv = res.speed_step;
  lat.du = lat.dv * lat.dt / 2.0;
  double cap = res.max_speed_factor * scenario.path.MaxSpeedLimit();
  cap = std::max(cap, scenario.v0 + a_max * lat.dt);
  lat.n_speed = static_cast<int>(std::ceil(cap / lat.dv));
  lat.v_max = lat.n_speed * lat.dv;
  // Inclusive index deltas reachable under the accel bounds.
  lat.dn_min = static_cast<int>(std::ceil(a_min * lat.dt / lat.dv - 1e-9));
  lat.dn_max = static_cast<int>(std::floor(a_max * lat.dt / lat.dv + 1e-9));
  if (lat.dn_max < lat.dn_min) {
    throw ContractError("lattice speed step too coarse for the accel bounds");
  }
  return lat;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

Trajectory SyntheticExpert(const Scenario& scenario, const GroundTruthReward& gt,
                           const DpResolution& resolution, double a_min, double a_max) {
  scenario.Validate();
  gt.Validate();
  resolution.Validate();
  LatticeSpec lat = MakeLattice(scenario, resolution, a_min, a_max);
  OccupancyMap occupancy = ProjectObstacles(scenario);

  const int n_v = lat.n_speed + 1;
  const double dt = lat.dt;
  // Station offset of the first step: s(1) = s0 + (v0 + v1) * dt / 2, so
  // every later station is s0 + beta + m * du with integer m.
  const double beta = scenario.v0 * dt / 2.0;

  // First-step speed nodes reachable from v0 (v0 itself need not be a node).
  std::vector<int> first_nodes;
  for (int n = 0; n < n_v; ++n) {
    double a = (n * lat.dv - scenario.v0) / dt;
    if (a >= a_min - 1e-9 && a <= a_max + 1e-9) first_nodes.push_back(n);
  }

  auto reward_at = [&](int k, double s, double v, double a) {
    TrajectoryPoint p{scenario.time_grid[static_cast<size_t>(k)], s, v, a, 0.0};
    return gt.Reward(ExtractFeatures(scenario, occupancy, p));
  };

  // Per step k >= 1: dense (station index, speed index) tables.
  std::vector<int> m_size(kNumTimePoints, 0);
  int max_dm = 2 * lat.n_speed;  // m grows by n_prev + n_next <= 2 * n_speed
  for (int k = 1; k < kNumTimePoints; ++k) m_size[static_cast<size_t>(k)] = (k) * max_dm + 1;

  std::vector<std::vector<double>> value(kNumTimePoints);
  std::vector<std::vector<int32_t>> parent(kNumTimePoints);  // packed m * n_v + n
  for (int k = 1; k < kNumTimePoints; ++k) {
    size_t cells = static_cast<size_t>(m_size[static_cast<size_t>(k)]) * static_cast<size_t>(n_v);
    value[static_cast<size_t>(k)].assign(cells, kNegInf);
    parent[static_cast<size_t>(k)].assign(cells, -1);
  }

  // Reward memo per (k, m, n): lazily filled; colliding states marked.
  std::vector<std::vector<double>> reward_memo(kNumTimePoints);
  for (int k = 1; k < kNumTimePoints; ++k) {
    reward_memo[static_cast<size_t>(k)].assign(value[static_cast<size_t>(k)].size(),
                                               std::numeric_limits<double>::quiet_NaN());
  }

  auto station_of = [&](int m) { return scenario.s0 + beta + m * lat.du; };

  auto state_reward = [&](int k, int m, int n) {
    double& memo = reward_memo[static_cast<size_t>(k)]
                              [static_cast<size_t>(m) * static_cast<size_t>(n_v) +
                               static_cast<size_t>(n)];
    if (std::isnan(memo)) {
      double s = station_of(m);
      if (PointCollides(occupancy, k, s)) {
        memo = kNegInf;  // forbidden state
      } else {
        memo = reward_at(k, s, n * lat.dv, 0.0);
      }
    }
    return memo;
  };

  // Initial state: not a decision, but its reward is part of the value.
  if (PointCollides(occupancy, 0, scenario.s0)) {
    throw ContractError("scenario starts inside a blocked region: " + scenario.id);
  }
  const double initial_reward = reward_at(0, scenario.s0, scenario.v0, scenario.a0);

  // Step 0 -> 1.
  double decay_k = gt.decay;
  for (int n : first_nodes) {
    int m = n;
    double r = state_reward(1, m, n);
    if (r == kNegInf) continue;
    double a_in = (n * lat.dv - scenario.v0) / dt;
    double v = initial_reward + decay_k * (r - gt.accel_smooth_weight * std::abs(a_in));
    size_t cell = static_cast<size_t>(m) * static_cast<size_t>(n_v) + static_cast<size_t>(n);
    if (v > value[1][cell]) {
      value[1][cell] = v;
      parent[1][cell] = 0;
    }
  }

  // Steps k -> k+1.
  for (int k = 1; k + 1 < kNumTimePoints; ++k) {
    decay_k *= gt.decay;
    const auto& cur = value[static_cast<size_t>(k)];
    auto& next = value[static_cast<size_t>(k + 1)];
    auto& next_parent = parent[static_cast<size_t>(k + 1)];
    int cur_m = m_size[static_cast<size_t>(k)];
    for (int m = 0; m < cur_m; ++m) {
      for (int n = 0; n < n_v; ++n) {
        double v_here = cur[static_cast<size_t>(m) * static_cast<size_t>(n_v) +
                            static_cast<size_t>(n)];
        if (v_here == kNegInf) continue;
        int lo = std::max(0, n + lat.dn_min);
        int hi = std::min(n_v - 1, n + lat.dn_max);
        for (int n2 = lo; n2 <= hi; ++n2) {
          int m2 = m + n + n2;
          double r = state_reward(k + 1, m2, n2);
          if (r == kNegInf) continue;
          double a_in = (n2 - n) * lat.dv / dt;
          double cand = v_here + decay_k * (r - gt.accel_smooth_weight * std::abs(a_in));
          size_t cell = static_cast<size_t>(m2) * static_cast<size_t>(n_v) +
                        static_cast<size_t>(n2);
          if (cand > next[cell]) {
            next[cell] = cand;
            next_parent[cell] = m * n_v + n;
          }
        }
      }
    }
  }

  // Argmax over terminal states; first hit wins ties (fixed scan order).
  const auto& last = value[kNumTimePoints - 1];
  double best = kNegInf;
  int best_cell = -1;
  for (size_t cell = 0; cell < last.size(); ++cell) {
    if (last[cell] > best) {
      best = last[cell];
      best_cell = static_cast<int>(cell);
    }
  }
  if (best_cell < 0) {
    throw ContractError("no collision-free lattice path exists for scenario " +
                        scenario.id);
  }

  // Walk parents back to the start.
  std::vector<int> cells(kNumTimePoints, -1);
  cells[kNumTimePoints - 1] = best_cell;
  for (int k = kNumTimePoints - 1; k >= 2; --k) {
    int p = parent[static_cast<size_t>(k)][static_cast<size_t>(cells[static_cast<size_t>(k)])];
    cells[static_cast<size_t>(k - 1)] = p;
  }

  Trajectory traj;
  traj.provenance = Provenance::kExpert;
  traj.points.resize(kNumTimePoints);
  traj.points[0] = {scenario.time_grid[0], scenario.s0, scenario.v0, scenario.a0, 0.0};
  double prev_v = scenario.v0;
  double prev_a = scenario.a0;
  for (int k = 1; k < kNumTimePoints; ++k) {
    int cell = cells[static_cast<size_t>(k)];
    int m = cell / n_v;
    int n = cell % n_v;
    double v = n * lat.dv;
    double a = (v - prev_v) / dt;
    double j = (a - prev_a) / dt;
    traj.points[static_cast<size_t>(k)] = {scenario.time_grid[static_cast<size_t>(k)],
                                           station_of(m), v, a, j};
    prev_v = v;
    prev_a = a;
  }
  traj.points[0].j = 0.0;
  return traj;
}

Trajectory SnapToLattice(const Scenario& scenario, const Trajectory& trajectory,
                         const DpResolution& resolution, double a_min, double a_max) {
  resolution.Validate();
  LatticeSpec lat = MakeLattice(scenario, resolution, a_min, a_max);
  const double dt = lat.dt;

  Trajectory out;
  out.provenance = trajectory.provenance;
  out.points.resize(kNumTimePoints);
  out.points[0] = trajectory.points[0];
  // Row 0 is the planner's fixed initial state, accel included.
  out.points[0].a = scenario.a0;

  double s = scenario.s0;
  double prev_v = scenario.v0;
  double prev_n_times_dv = scenario.v0;  // exact previous speed (v0 or node value)
  double prev_a = scenario.a0;
  for (int k = 1; k < kNumTimePoints; ++k) {
    double target = trajectory.points[static_cast<size_t>(k)].v;
    int n = static_cast<int>(std::lround(target / lat.dv));
    // Clamp into the accel window around the previous (already snapped)
    // speed, then into the lattice range.
    int n_lo, n_hi;
    if (k == 1) {
      n_lo = static_cast<int>(std::ceil((prev_v + a_min * dt) / lat.dv - 1e-9));
      n_hi = static_cast<int>(std::floor((prev_v + a_max * dt) / lat.dv + 1e-9));
    } else {
      int prev_n = static_cast<int>(std::lround(prev_n_times_dv / lat.dv));
      n_lo = prev_n + lat.dn_min;
      n_hi = prev_n + lat.dn_max;
    }
    n = std::clamp(n, std::max(0, n_lo), std::min(lat.n_speed, std::max(0, n_hi)));
    double v = n * lat.dv;
    s += (prev_n_times_dv + v) * dt / 2.0;
    double a = (v - prev_n_times_dv) / dt;
    double j = (a - prev_a) / dt;
    out.points[static_cast<size_t>(k)] = {scenario.time_grid[static_cast<size_t>(k)],
                                          s, v, a, j};
    prev_n_times_dv = v;
    prev_a = a;
  }
  return out;
}

}  // namespace autotune
