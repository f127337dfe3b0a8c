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

#include <stdexcept>
#include <string>

namespace autotune {

inline constexpr const char* kToolVersion = "0.1.0";

// Shape of the problem: speed profiles are scored at a fixed grid of
// evaluation times, with a fixed raw-feature layout per point.
inline constexpr int kNumTimePoints = 18;
inline constexpr int kNumFeatures = 21;
inline constexpr int kNumHidden = 15;

// Raw feature channel layout. Order is part of every file format that
// stores feature blocks.
enum FeatureChannel : int {
  kChLatOffset = 0,       // l: lateral coordinate w.r.t. lane center (m)
  kChLatOffsetD = 1,      // dl/ds
  kChLatOffsetDD = 2,     // d2l/ds2
  kChCurvature = 3,       // kappa (1/m)
  kChStation = 4,         // s (m)
  kChTime = 5,            // t (s)
  kChVelocity = 6,        // v (m/s)
  kChSpeedLimit = 7,      // v_lim at s (m/s)
  kChAccel = 8,           // a (m/s^2)
  kChJerk = 9,            // j (m/s^3)
  kChCollisionDist = 10,  // distance to closest blocked region (m)
  kChFollowDist = 11,     // station gap to followed obstacle (m)
  kChFollowSpeed = 12,    // followed obstacle speed (m/s)
  kChOvertakeDist = 13,   // station gap to overtake obstacle (m)
  kChOvertakeSpeed = 14,  // overtake obstacle speed (m/s)
  kChStopDist = 15,       // station gap to stop line (m)
  kChVirtualDist = 16,    // station gap to virtual obstacle (m)
  kChNudgeLateral = 17,   // lateral gap to nudge obstacle (m)
  kChNudgeSpeed = 18,     // nudge obstacle speed (m/s)
  kChLatAccel = 19,       // kappa * v^2 (m/s^2)
  kChLatJerk = 20,        // d(kappa * v^2)/dt (m/s^3)
};

// Error taxonomy. The CLI maps these onto process exit codes:
//   ParseError -> 2, ContractError -> 3, NumericError -> 4.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace autotune
