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

#include "autotune/sampler.h"

#include <algorithm>
#include <cmath>

#include "autotune/rng.h"

namespace autotune {

void SamplerConfig::Validate() const {
  if (n_samples < 1) throw ContractError("sampler needs n_samples >= 1");
  if (!(a_min <= 0.0 && 0.0 <= a_max)) {
    throw ContractError("sampler accel bounds must bracket zero");
  }
  if (!(jerk_limit > 0.0)) throw ContractError("sampler jerk limit must be positive");
  if (pieces < 1) throw ContractError("sampler needs at least one accel piece");
  if (!(hold_speed_prob >= 0.0 && hold_speed_prob < 1.0)) {
    throw ContractError("hold-speed probability must lie in [0, 1)");
  }
}

nlohmann::json ToJson(const SamplerConfig& config) {
  return nlohmann::json{{"n_samples", config.n_samples}, {"a_min", config.a_min},
                        {"a_max", config.a_max},         {"jerk_limit", config.jerk_limit},
                        {"pieces", config.pieces},       {"hold_speed_prob", config.hold_speed_prob},
                        {"seed", config.seed}};
}

SamplerConfig SamplerConfigFromJson(const nlohmann::json& j) {
  SamplerConfig c;
  try {
    c.n_samples = j.value("n_samples", c.n_samples);
    c.a_min = j.value("a_min", c.a_min);
    c.a_max = j.value("a_max", c.a_max);
    c.jerk_limit = j.value("jerk_limit", c.jerk_limit);
    c.pieces = j.value("pieces", c.pieces);
    c.hold_speed_prob = j.value("hold_speed_prob", c.hold_speed_prob);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad sampler config: ") + e.what());
  }
  c.Validate();
  return c;
}

namespace {

// Closed-form advance of (s, v) over dt under constant accel with the
// speed clamped at zero. Returns the state at the end of the interval.
void Advance(double a, double dt, double& s, double& v) {
  if (a < 0.0 && v + a * dt < 0.0) {
    double t_stop = v / -a;
    if (t_stop < dt) {
      s += v * t_stop + 0.5 * a * t_stop * t_stop;
      v = 0.0;
      return;
    }
  }
  s += v * dt + 0.5 * a * dt * dt;
  v = std::max(0.0, v + a * dt);
}

}  // namespace

std::vector<Trajectory> SampleTrajectories(const Scenario& scenario,
                                           const SamplerConfig& config) {
  config.Validate();
  scenario.Validate();

  const double horizon = scenario.time_grid.back();
  const double piece_dt = horizon / config.pieces;
  const double dt_grid = scenario.Dt();
  // Accel change across a piece boundary is smeared over one grid step,
  // so bounding it by jerk_limit * dt keeps the recorded jerk in range.
  const double max_step = config.jerk_limit * dt_grid;

  Rng rng(SubstreamSeed(config.seed, "sampler", scenario.seed));

  std::vector<Trajectory> out;
  out.reserve(static_cast<size_t>(config.n_samples));
  for (int n = 0; n < config.n_samples; ++n) {
    // Piece accelerations mix hold-speed primitives (exact zero) with
    // continuous draws, like lattice candidate generators do.
    std::vector<double> accel(static_cast<size_t>(config.pieces));
    auto draw = [&](double lo, double hi) {
      if (lo <= 0.0 && 0.0 <= hi && rng.Uniform() < config.hold_speed_prob) return 0.0;
      return rng.Uniform(lo, hi);
    };
    accel[0] = draw(config.a_min, config.a_max);
    for (int p = 1; p < config.pieces; ++p) {
      double lo = std::max(config.a_min, accel[static_cast<size_t>(p - 1)] - max_step);
      double hi = std::min(config.a_max, accel[static_cast<size_t>(p - 1)] + max_step);
      accel[static_cast<size_t>(p)] = draw(lo, hi);
    }

    auto piece_of = [&](double t) {
      int p = static_cast<int>(t / piece_dt);
      return std::min(p, config.pieces - 1);
    };

    Trajectory traj;
    traj.provenance = Provenance::kSampled;
    traj.points.resize(kNumTimePoints);

    double s = scenario.s0;
    double v = scenario.v0;
    double prev_a = scenario.a0;
    double t_cursor = 0.0;
    for (int k = 0; k < kNumTimePoints; ++k) {
      double t_k = scenario.time_grid[static_cast<size_t>(k)];
      // Integrate piece by piece up to t_k; pieces need not align with
      // the grid.
      while (t_cursor < t_k - 1e-12) {
        int p = piece_of(t_cursor);
        double t_piece_end = (p + 1) * piece_dt;
        double t_stop = std::min(t_k, t_piece_end);
        Advance(accel[static_cast<size_t>(p)], t_stop - t_cursor, s, v);
        t_cursor = t_stop;
      }
      double a_piece = accel[static_cast<size_t>(piece_of(std::min(t_k, horizon - 1e-12)))];
      // A stopped vehicle under braking holds a = 0 (speed clamp).
      double a_k = (v == 0.0 && a_piece < 0.0) ? 0.0 : a_piece;
      double j_k = (k == 0) ? 0.0 : (a_k - prev_a) / dt_grid;
      traj.points[static_cast<size_t>(k)] = {t_k, s, v, a_k, j_k};
      prev_a = a_k;
    }
    out.push_back(std::move(traj));
  }
  return out;
}

}  // namespace autotune
