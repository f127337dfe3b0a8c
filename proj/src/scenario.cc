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

#include "autotune/scenario.h"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace autotune {

namespace {

constexpr double kGridTolerance = 1e-9;

void RequireFinite(const std::vector<double>& v, const char* name) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw ContractError(std::string("non-finite value in ") + name);
    }
  }
}

// Index of the interpolation segment containing s, or -1 / n-1 for the
// clamped regions left/right of the grid.
int SegmentIndex(const std::vector<double>& grid, double s) {
  if (s < grid.front()) return -1;
  if (s >= grid.back()) return static_cast<int>(grid.size()) - 1;
  auto it = std::upper_bound(grid.begin(), grid.end(), s);
  return static_cast<int>(it - grid.begin()) - 1;
}

double Interp(const std::vector<double>& grid, const std::vector<double>& vals,
              double s) {
  int i = SegmentIndex(grid, s);
  if (i < 0) return vals.front();
  if (i >= static_cast<int>(grid.size()) - 1) return vals.back();
  size_t u = static_cast<size_t>(i);
  double w = (s - grid[u]) / (grid[u + 1] - grid[u]);
  return vals[u] + w * (vals[u + 1] - vals[u]);
}

}  // namespace

void PathProfile::Validate() const {
  if (station.size() < 2) {
    throw ContractError("path profile needs at least two station knots");
  }
  for (size_t i = 1; i < station.size(); ++i) {
    if (!(station[i] > station[i - 1])) {
      throw ContractError("path station grid must be strictly increasing");
    }
  }
  auto check_len = [&](const std::vector<double>& v, const char* name) {
    if (v.size() != station.size()) {
      throw ContractError(std::string("path array length mismatch: ") + name);
    }
  };
  check_len(curvature, "curvature");
  check_len(speed_limit, "speed_limit");
  check_len(l, "l");
  check_len(dl, "dl");
  check_len(ddl, "ddl");
  RequireFinite(station, "station");
  RequireFinite(curvature, "curvature");
  RequireFinite(l, "l");
  RequireFinite(dl, "dl");
  RequireFinite(ddl, "ddl");
  for (double v : speed_limit) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ContractError("speed limit must be positive and finite");
    }
  }
}

double PathProfile::CurvatureAt(double s) const { return Interp(station, curvature, s); }
double PathProfile::SpeedLimitAt(double s) const { return Interp(station, speed_limit, s); }
double PathProfile::LateralAt(double s) const { return Interp(station, l, s); }
double PathProfile::LateralDAt(double s) const { return Interp(station, dl, s); }
double PathProfile::LateralDDAt(double s) const { return Interp(station, ddl, s); }

double PathProfile::CurvatureSlopeAt(double s) const {
  int i = SegmentIndex(station, s);
  if (i < 0 || i >= static_cast<int>(station.size()) - 1) return 0.0;
  size_t u = static_cast<size_t>(i);
  return (curvature[u + 1] - curvature[u]) / (station[u + 1] - station[u]);
}

double PathProfile::MaxSpeedLimit() const {
  return *std::max_element(speed_limit.begin(), speed_limit.end());
}

std::string ToString(ObstacleKind kind) {
  switch (kind) {
    case ObstacleKind::kFollow: return "follow";
    case ObstacleKind::kOvertake: return "overtake";
    case ObstacleKind::kStop: return "stop";
    case ObstacleKind::kVirtual: return "virtual";
    case ObstacleKind::kNudge: return "nudge";
  }
  throw ContractError("unknown obstacle kind");
}

ObstacleKind ObstacleKindFromString(const std::string& s) {
  if (s == "follow") return ObstacleKind::kFollow;
  if (s == "overtake") return ObstacleKind::kOvertake;
  if (s == "stop") return ObstacleKind::kStop;
  if (s == "virtual") return ObstacleKind::kVirtual;
  if (s == "nudge") return ObstacleKind::kNudge;
  throw ParseError("unknown obstacle kind: " + s);
}

void Obstacle::Validate(int num_times) const {
  if (TimeInvariant()) {
    if (!std::isfinite(station)) {
      throw ContractError("stop/virtual obstacle station must be finite");
    }
    if (!slices.empty()) {
      throw ContractError("stop/virtual obstacles are time-invariant and carry no slices");
    }
    return;
  }
  if (static_cast<int>(slices.size()) != num_times) {
    throw ContractError("obstacle slice list must match the time grid length");
  }
  for (const auto& slice : slices) {
    if (!slice.has_value()) continue;
    if (!std::isfinite(slice->s_rear) || !std::isfinite(slice->s_front) ||
        !std::isfinite(slice->speed)) {
      throw ContractError("obstacle slice values must be finite");
    }
    if (!(slice->s_rear <= slice->s_front)) {
      throw ContractError("obstacle slice must satisfy s_rear <= s_front");
    }
  }
  if (kind == ObstacleKind::kNudge && !std::isfinite(lateral_gap)) {
    throw ContractError("nudge lateral gap must be finite");
  }
}

void Scenario::Validate() const {
  path.Validate();
  if (static_cast<int>(time_grid.size()) != kNumTimePoints) {
    throw ContractError("time grid must hold exactly 18 points");
  }
  if (time_grid.front() != 0.0) {
    throw ContractError("time grid must start at t = 0");
  }
  for (size_t i = 1; i < time_grid.size(); ++i) {
    if (!(time_grid[i] > time_grid[i - 1])) {
      throw ContractError("time grid must be strictly increasing");
    }
  }
  RequireFinite(time_grid, "time_grid");
  if (!(v0 >= 0.0) || !std::isfinite(v0)) {
    throw ContractError("initial speed must be non-negative");
  }
  if (!std::isfinite(a0) || !std::isfinite(s0)) {
    throw ContractError("initial state must be finite");
  }
  for (const auto& ob : obstacles) ob.Validate(kNumTimePoints);
}

bool Scenario::UniformGrid() const {
  double dt = Dt();
  for (size_t i = 1; i < time_grid.size(); ++i) {
    if (std::abs((time_grid[i] - time_grid[i - 1]) - dt) > kGridTolerance) {
      return false;
    }
  }
  return true;
}

std::string ToString(Provenance p) {
  switch (p) {
    case Provenance::kExpert: return "expert";
    case Provenance::kSampled: return "sampled";
    case Provenance::kSelected: return "selected";
  }
  throw ContractError("unknown provenance");
}

Provenance ProvenanceFromString(const std::string& s) {
  if (s == "expert") return Provenance::kExpert;
  if (s == "sampled") return Provenance::kSampled;
  if (s == "selected") return Provenance::kSelected;
  throw ParseError("unknown provenance: " + s);
}

void Trajectory::Validate(const Scenario& scenario) const {
  if (static_cast<int>(points.size()) != kNumTimePoints) {
    throw ContractError("trajectory must hold exactly 18 points");
  }
  for (int k = 0; k < kNumTimePoints; ++k) {
    const auto& p = points[static_cast<size_t>(k)];
    if (p.t != scenario.time_grid[static_cast<size_t>(k)]) {
      throw ContractError("trajectory point times must equal the scenario time grid");
    }
    if (!(p.v >= 0.0)) {
      throw ContractError("trajectory speed must be non-negative");
    }
    if (!std::isfinite(p.s) || !std::isfinite(p.v) || !std::isfinite(p.a) ||
        !std::isfinite(p.j)) {
      throw ContractError("trajectory point values must be finite");
    }
    if (k > 0 && p.s < points[static_cast<size_t>(k - 1)].s) {
      throw ContractError("trajectory station must be non-decreasing");
    }
  }
}

nlohmann::json ToJson(const PathProfile& path) {
  return nlohmann::json{{"station", path.station}, {"curvature", path.curvature},
                        {"speed_limit", path.speed_limit}, {"l", path.l},
                        {"dl", path.dl},               {"ddl", path.ddl}};
}

PathProfile PathProfileFromJson(const nlohmann::json& j) {
  PathProfile p;
  try {
    p.station = j.at("station").get<std::vector<double>>();
    p.curvature = j.at("curvature").get<std::vector<double>>();
    p.speed_limit = j.at("speed_limit").get<std::vector<double>>();
    p.l = j.at("l").get<std::vector<double>>();
    p.dl = j.at("dl").get<std::vector<double>>();
    p.ddl = j.at("ddl").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad path profile: ") + e.what());
  }
  return p;
}

nlohmann::json ToJson(const Obstacle& obstacle) {
  nlohmann::json j{{"kind", ToString(obstacle.kind)}};
  if (obstacle.TimeInvariant()) {
    j["station"] = obstacle.station;
    return j;
  }
  if (obstacle.kind == ObstacleKind::kNudge) j["lateral_gap"] = obstacle.lateral_gap;
  nlohmann::json slices = nlohmann::json::array();
  for (size_t k = 0; k < obstacle.slices.size(); ++k) {
    if (!obstacle.slices[k].has_value()) continue;
    const StSlice& s = *obstacle.slices[k];
    slices.push_back({{"k", k}, {"s_rear", s.s_rear}, {"s_front", s.s_front},
                      {"speed", s.speed}});
  }
  j["slices"] = std::move(slices);
  return j;
}

Obstacle ObstacleFromJson(const nlohmann::json& j, int num_times) {
  Obstacle ob;
  try {
    ob.kind = ObstacleKindFromString(j.at("kind").get<std::string>());
    if (ob.TimeInvariant()) {
      ob.station = j.at("station").get<double>();
    } else {
      ob.lateral_gap = j.value("lateral_gap", 0.0);
      ob.slices.assign(static_cast<size_t>(num_times), std::nullopt);
      for (const auto& s : j.at("slices")) {
        int k = s.at("k").get<int>();
        if (k < 0 || k >= num_times) {
          throw ParseError("obstacle slice index out of range");
        }
        ob.slices[static_cast<size_t>(k)] =
            StSlice{s.at("s_rear").get<double>(), s.at("s_front").get<double>(),
                    s.at("speed").get<double>()};
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad obstacle: ") + e.what());
  }
  return ob;
}

nlohmann::json ToJson(const Scenario& scenario) {
  nlohmann::json obstacles = nlohmann::json::array();
  for (const auto& ob : scenario.obstacles) obstacles.push_back(ToJson(ob));
  return nlohmann::json{{"id", scenario.id},       {"seed", scenario.seed},
                        {"path", ToJson(scenario.path)}, {"obstacles", obstacles},
                        {"v0", scenario.v0},       {"a0", scenario.a0},
                        {"s0", scenario.s0},       {"time_grid", scenario.time_grid}};
}

Scenario ScenarioFromJson(const nlohmann::json& j) {
  Scenario sc;
  try {
    sc.id = j.at("id").get<std::string>();
    sc.seed = j.at("seed").get<uint64_t>();
    sc.path = PathProfileFromJson(j.at("path"));
    sc.v0 = j.at("v0").get<double>();
    sc.a0 = j.at("a0").get<double>();
    sc.s0 = j.at("s0").get<double>();
    sc.time_grid = j.at("time_grid").get<std::vector<double>>();
    for (const auto& ob : j.at("obstacles")) {
      sc.obstacles.push_back(ObstacleFromJson(ob, static_cast<int>(sc.time_grid.size())));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad scenario: ") + e.what());
  }
  sc.Validate();
  return sc;
}

nlohmann::json ToJson(const Trajectory& trajectory) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : trajectory.points) {
    points.push_back({p.t, p.s, p.v, p.a, p.j});
  }
  return nlohmann::json{{"provenance", ToString(trajectory.provenance)},
                        {"points", std::move(points)}};
}

Trajectory TrajectoryFromJson(const nlohmann::json& j) {
  Trajectory tr;
  try {
    tr.provenance = ProvenanceFromString(j.at("provenance").get<std::string>());
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 5) {
        throw ParseError("trajectory point must be a 5-element array");
      }
      tr.points.push_back(TrajectoryPoint{p[0].get<double>(), p[1].get<double>(),
                                          p[2].get<double>(), p[3].get<double>(),
                                          p[4].get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad trajectory: ") + e.what());
  }
  return tr;
}

void SaveSuite(const std::vector<Scenario>& suite, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& sc : suite) arr.push_back(ToJson(sc));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << arr.dump(1) << "\n";
}

std::vector<Scenario> LoadSuite(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open suite file: " + path);
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed suite file " + path + ": " + e.what());
  }
  if (!arr.is_array()) throw ParseError("suite file must hold a JSON array");
  std::vector<Scenario> suite;
  suite.reserve(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    try {
      suite.push_back(ScenarioFromJson(arr[i]));
    } catch (const std::exception& e) {
      throw ParseError("scenario " + std::to_string(i) + ": " + e.what());
    }
  }
  return suite;
}

}  // namespace autotune
