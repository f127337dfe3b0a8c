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

#include <optional>
#include <string>
#include <vector>

#include "autotune/scenario.h"

namespace autotune {

inline constexpr int kFramesFormatVersion = 1;

// One training record: a scenario reference, its expert trajectory, and
// the query of sampled sibling trajectories. Feature blocks are raw
// (un-normalized) and optional on disk; when absent they are recomputed
// from the scenario at ingest time.
struct FrameRecord {
  std::string scenario_id;
  std::string split;  // "train" or "holdout"
  std::vector<double> time_grid;
  Trajectory expert;
  std::vector<Trajectory> samples;
  std::optional<FeatureBlock> expert_features;
  std::optional<std::vector<FeatureBlock>> sample_features;
};

// JSON-lines file, one frame per line.
void WriteFrames(const std::vector<FrameRecord>& frames, const std::string& path);

// Parse errors carry the 1-based line number.
std::vector<FrameRecord> ReadFrames(const std::string& path);

nlohmann::json ToJson(const FrameRecord& frame);
FrameRecord FrameRecordFromJson(const nlohmann::json& j);

}  // namespace autotune
