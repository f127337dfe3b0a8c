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

#include "autotune/suite.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "autotune/rng.h"

namespace autotune {

void SuiteConfig::Validate() const {
  if (counts.empty()) throw ContractError("suite config must name at least one family");
  int total = 0;
  for (const auto& [family, count] : counts) {
    const auto& known = KnownFamilies();
    if (std::find(known.begin(), known.end(), family) == known.end()) {
      throw ContractError("unknown scenario family: " + family);
    }
    if (count < 0) throw ContractError("family counts must be non-negative");
    total += count;
  }
  if (total == 0) throw ContractError("suite config must request at least one scenario");
  if (!(dt > 0.0)) throw ContractError("grid spacing must be positive");
  if (!(v0_min >= 0.0 && v0_max >= v0_min)) throw ContractError("bad v0 range");
  if (!(vlim_min > 0.0 && vlim_max >= vlim_min)) throw ContractError("bad speed limit range");
  if (!(stop_min > 0.0 && stop_max >= stop_min)) throw ContractError("bad stop range");
}

const std::vector<std::string>& KnownFamilies() {
  static const std::vector<std::string> families = {"cruise", "stop", "follow",
                                                    "yield", "overtake", "nudge"};
  return families;
}

nlohmann::json ToJson(const SuiteConfig& c) {
  return nlohmann::json{{"counts", c.counts},
                        {"dt", c.dt},
                        {"path_length", c.path_length},
                        {"path_knot_spacing", c.path_knot_spacing},
                        {"v0_min", c.v0_min},
                        {"v0_max", c.v0_max},
                        {"vlim_min", c.vlim_min},
                        {"vlim_max", c.vlim_max},
                        {"curvature_max", c.curvature_max},
                        {"lateral_amp_max", c.lateral_amp_max},
                        {"s0_spread", c.s0_spread},
                        {"stop_min", c.stop_min},
                        {"stop_max", c.stop_max},
                        {"virtual_fraction", c.virtual_fraction},
                        {"comfort_lat_accel", c.comfort_lat_accel},
                        {"brake_headroom", c.brake_headroom}};
}

SuiteConfig SuiteConfigFromJson(const nlohmann::json& j) {
  SuiteConfig c;
  try {
    c.counts = j.at("counts").get<std::map<std::string, int>>();
    c.dt = j.value("dt", c.dt);
    c.path_length = j.value("path_length", c.path_length);
    c.path_knot_spacing = j.value("path_knot_spacing", c.path_knot_spacing);
    c.v0_min = j.value("v0_min", c.v0_min);
    c.v0_max = j.value("v0_max", c.v0_max);
    c.vlim_min = j.value("vlim_min", c.vlim_min);
    c.vlim_max = j.value("vlim_max", c.vlim_max);
    c.curvature_max = j.value("curvature_max", c.curvature_max);
    c.lateral_amp_max = j.value("lateral_amp_max", c.lateral_amp_max);
    c.s0_spread = j.value("s0_spread", c.s0_spread);
    c.stop_min = j.value("stop_min", c.stop_min);
    c.stop_max = j.value("stop_max", c.stop_max);
    c.virtual_fraction = j.value("virtual_fraction", c.virtual_fraction);
    c.comfort_lat_accel = j.value("comfort_lat_accel", c.comfort_lat_accel);
    c.brake_headroom = j.value("brake_headroom", c.brake_headroom);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad suite config: ") + e.what());
  }
  c.Validate();
  return c;
}

namespace {

std::vector<double> MakeTimeGrid(double dt) {
  std::vector<double> grid(kNumTimePoints);
  for (int k = 0; k < kNumTimePoints; ++k) grid[static_cast<size_t>(k)] = k * dt;
  return grid;
}

PathProfile MakePath(const SuiteConfig& cfg, double s0, Rng& rng) {
  PathProfile path;
  int knots = static_cast<int>(cfg.path_length / cfg.path_knot_spacing) + 1;
  path.station.resize(static_cast<size_t>(knots));
  for (int i = 0; i < knots; ++i) {
    path.station[static_cast<size_t>(i)] = s0 + i * cfg.path_knot_spacing;
  }

  // Curvature: straight, or one to two gentle arcs blended linearly
  // between knots.
  path.curvature.assign(static_cast<size_t>(knots), 0.0);
  int arcs = rng.UniformInt(0, 2);
  for (int a = 0; a < arcs; ++a) {
    double kappa = rng.Uniform(-cfg.curvature_max, cfg.curvature_max);
    int lo = rng.UniformInt(0, knots - 2);
    int hi = rng.UniformInt(lo + 1, knots - 1);
    for (int i = lo; i <= hi; ++i) path.curvature[static_cast<size_t>(i)] = kappa;
  }

  // Speed limit: continuous base value, tightened in curves to keep
  // comfortable lateral acceleration at the limit.
  double base = rng.Uniform(cfg.vlim_min, cfg.vlim_max);
  path.speed_limit.resize(static_cast<size_t>(knots));
  for (int i = 0; i < knots; ++i) {
    double kappa = std::abs(path.curvature[static_cast<size_t>(i)]);
    double cap = kappa > 1e-9 ? std::sqrt(cfg.comfort_lat_accel / kappa) : base;
    path.speed_limit[static_cast<size_t>(i)] = std::max(2.0, std::min(base, cap));
  }

  // Lane offset: flat half the time, otherwise a sinusoid with consistent
  // derivatives.
  path.l.assign(static_cast<size_t>(knots), 0.0);
  path.dl.assign(static_cast<size_t>(knots), 0.0);
  path.ddl.assign(static_cast<size_t>(knots), 0.0);
  if (rng.Uniform() < 0.5) {
    double amp = rng.Uniform(0.05, cfg.lateral_amp_max);
    double wavelength = rng.Uniform(60.0, 160.0);
    double omega = 2.0 * std::numbers::pi / wavelength;
    for (int i = 0; i < knots; ++i) {
      double s = path.station[static_cast<size_t>(i)];
      path.l[static_cast<size_t>(i)] = amp * std::sin(omega * s);
      path.dl[static_cast<size_t>(i)] = amp * omega * std::cos(omega * s);
      path.ddl[static_cast<size_t>(i)] = -amp * omega * omega * std::sin(omega * s);
    }
  }
  return path;
}

// Largest v0 that can still brake to rest before `clear_station`, with
// headroom. Keeps every generated scenario solvable by a full stop.
double CapV0(double v0, double clear_station, double brake) {
  double margin = std::max(1.0, clear_station - 5.0);
  return std::min(v0, std::sqrt(2.0 * brake * margin));
}

Obstacle ConstantVelocityObstacle(ObstacleKind kind, double s_rear0, double length,
                                  double speed, const std::vector<double>& grid) {
  Obstacle ob;
  ob.kind = kind;
  ob.slices.resize(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) {
    double rear = s_rear0 + speed * grid[k];
    ob.slices[k] = StSlice{rear, rear + length, speed};
  }
  return ob;
}

Obstacle WindowedObstacle(ObstacleKind kind, double s_lo, double length, double speed,
                          double t_from, double t_to, const std::vector<double>& grid) {
  Obstacle ob;
  ob.kind = kind;
  ob.slices.resize(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] >= t_from && grid[k] <= t_to) {
      ob.slices[k] = StSlice{s_lo, s_lo + length, speed};
    }
  }
  return ob;
}

}  // namespace

std::vector<Scenario> GenerateScenarioSuite(const SuiteConfig& config, uint64_t seed) {
  config.Validate();
  std::vector<Scenario> suite;

  for (const std::string& family : KnownFamilies()) {
    auto it = config.counts.find(family);
    if (it == config.counts.end()) continue;
    for (int idx = 0; idx < it->second; ++idx) {
      uint64_t scenario_seed = SubstreamSeed(seed, family, static_cast<uint64_t>(idx));
      Rng rng(scenario_seed);

      Scenario sc;
      char idbuf[64];
      std::snprintf(idbuf, sizeof(idbuf), "%s_%04d", family.c_str(), idx);
      sc.id = idbuf;
      sc.seed = scenario_seed;
      sc.time_grid = MakeTimeGrid(config.dt);
      sc.s0 = config.s0_spread > 0.0 ? rng.Uniform(0.0, config.s0_spread) : 0.0;
      sc.path = MakePath(config, sc.s0, rng);
      sc.a0 = rng.Uniform(-0.5, 0.5);

      double vlim0 = sc.path.SpeedLimitAt(sc.s0);
      double v0 = rng.Uniform(config.v0_min, config.v0_max);
      v0 = std::min(v0, 0.85 * vlim0);

      if (family == "cruise") {
        // Start clearly under the limit so the expert has to change speed.
        v0 = std::min(v0, rng.Uniform(0.3, 0.7) * vlim0);
      } else if (family == "stop") {
        double stop_s = rng.Uniform(config.stop_min, config.stop_max);
        v0 = CapV0(v0, stop_s, config.brake_headroom);
        Obstacle ob;
        ob.kind = rng.Uniform() < config.virtual_fraction ? ObstacleKind::kVirtual
                                                          : ObstacleKind::kStop;
        ob.station = sc.s0 + stop_s;
        sc.obstacles.push_back(ob);
      } else if (family == "follow") {
        double gap = rng.Uniform(15.0, 40.0);
        double lead_v = std::max(0.5, rng.Uniform(0.3, 0.8) * std::max(v0, 2.0));
        v0 = std::min(v0, lead_v + std::sqrt(2.0 * config.brake_headroom * gap));
        sc.obstacles.push_back(ConstantVelocityObstacle(
            ObstacleKind::kFollow, sc.s0 + gap, 5.0, lead_v, sc.time_grid));
      } else if (family == "yield") {
        // Blocked from the start until the crosser clears.
        double s_c = rng.Uniform(25.0, 70.0);
        double t_clear = rng.Uniform(2.5, 5.5);
        double cross_v = rng.Uniform(1.0, 4.0);
        v0 = CapV0(v0, s_c, config.brake_headroom);
        sc.obstacles.push_back(WindowedObstacle(ObstacleKind::kOvertake, sc.s0 + s_c,
                                                rng.Uniform(4.0, 8.0), cross_v, 0.0,
                                                t_clear, sc.time_grid));
      } else if (family == "overtake") {
        // Blocked later; passing before arrival stays clear.
        double s_c = rng.Uniform(35.0, 90.0);
        double t_arrive = rng.Uniform(3.0, 6.0);
        double cross_v = rng.Uniform(1.0, 4.0);
        v0 = CapV0(v0, s_c, config.brake_headroom);
        sc.obstacles.push_back(WindowedObstacle(
            ObstacleKind::kOvertake, sc.s0 + s_c, rng.Uniform(4.0, 8.0), cross_v,
            t_arrive, sc.time_grid.back() + 1.0, sc.time_grid));
      } else if (family == "nudge") {
        double s_n = sc.s0 + rng.Uniform(20.0, 80.0);
        double side = rng.Uniform() < 0.5 ? -1.0 : 1.0;
        Obstacle ob = ConstantVelocityObstacle(ObstacleKind::kNudge, s_n, 6.0,
                                               rng.Uniform(0.0, 1.0), sc.time_grid);
        ob.lateral_gap = side * rng.Uniform(0.8, 2.2);
        sc.obstacles.push_back(ob);
      }

      sc.v0 = std::max(0.0, v0);
      sc.Validate();
      suite.push_back(std::move(sc));
    }
  }
  return suite;
}

}  // namespace autotune
