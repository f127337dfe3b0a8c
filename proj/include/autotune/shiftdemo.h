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

#include <array>
#include <cstdint>
#include <vector>

#include <json.hpp>

namespace autotune {

using Vec2 = std::array<double, 2>;

inline constexpr int kMarginSamples = 100;
// Heavy-tailed draws are clipped into this box to keep plots readable;
// the clip count is recorded.
inline constexpr double kMarginClipHalfWidth = 50.0;

// One max-margin toy frame in a 2D reward-feature space: a sample cloud,
// one demonstration point, and the rigid shift applied to the whole
// frame.
struct MarginFrame {
  std::vector<Vec2> samples;  // exactly 100
  Vec2 demo{};
  Vec2 shift{};
  int clipped = 0;
};

// 100 Cauchy draws around the origin (clipped), a demonstration offset
// from the cloud, then the whole frame translated by `shift`.
// Deterministic per seed.
MarginFrame GenerateFrame(uint64_t seed, Vec2 shift);

// Same construction with a caller-chosen demonstration offset; the
// two-frame report uses different offsets so pooling degrades by more
// than a rigid translation.
MarginFrame GenerateFrameWithDemoOffset(uint64_t seed, Vec2 shift, Vec2 demo_offset);

struct DirectionResult {
  Vec2 direction{};   // unit norm
  double margin = 0.0;
  // No direction separates the demonstration in every frame; the
  // max-min direction is still returned.
  bool negative_margin = false;
};

// Worst-case margin of `direction` across the frame's samples.
double MarginOfDirection(const MarginFrame& frame, const Vec2& direction);

// Unit direction maximizing the minimum of w . (demo - sample) over all
// frames and samples: dense 3600-angle sweep plus golden-section
// refinement.
DirectionResult OptimalDirection(const std::vector<MarginFrame>& frames);

struct ShiftReport {
  MarginFrame frame1;
  MarginFrame frame2;
  DirectionResult dir1;
  DirectionResult dir2;
  DirectionResult pooled;
  double angle_pooled_to_1_deg = 0.0;
  double angle_pooled_to_2_deg = 0.0;
  double pooled_margin_in_1 = 0.0;
  double pooled_margin_in_2 = 0.0;
};

// The fixed two-frame setup: a base frame and a second frame with a
// different demonstration-to-cloud geometry plus a rigid background
// shift. Per-frame optima separate their own frames; the pooled
// direction is optimal for neither.
ShiftReport MakeShiftReport(uint64_t seed);

void WritePointsCsv(const ShiftReport& report, const std::string& path);
void WriteDirectionsCsv(const ShiftReport& report, const std::string& path);
nlohmann::json ToJson(const ShiftReport& report);

}  // namespace autotune
