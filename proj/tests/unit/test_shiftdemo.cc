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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "autotune/shiftdemo.h"

using namespace autotune;

namespace {

// Independent oracle: a flat 10000-angle scan with no refinement.
double SweepOracleAngle(const std::vector<MarginFrame>& frames) {
  double best = -1e300;
  double best_theta = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double theta = 2.0 * std::numbers::pi * i / 10000;
    Vec2 dir{std::cos(theta), std::sin(theta)};
    double worst = 1e300;
    for (const auto& f : frames) {
      worst = std::min(worst, MarginOfDirection(f, dir));
    }
    if (worst > best) {
      best = worst;
      best_theta = theta;
    }
  }
  return best_theta;
}

double AngleDeg(const Vec2& a, const Vec2& b) {
  double dot = std::clamp(a[0] * b[0] + a[1] * b[1], -1.0, 1.0);
  return std::acos(dot) * 180.0 / std::numbers::pi;
}

MarginFrame HandmadeFrame(double demo_x, double demo_y) {
  // Deterministic cluster strictly left of the demonstration, spread
  // symmetrically about y = 0 so the separating direction is horizontal.
  MarginFrame f;
  for (int i = 0; i < kMarginSamples; ++i) {
    f.samples.push_back(Vec2{-10.0 - (i % 10), -4.5 + 1.0 * (i / 10)});
  }
  f.demo = Vec2{demo_x, demo_y};
  return f;
}

}  // namespace

TEST_CASE("zero shift reproduces the base frame bit for bit") {
  MarginFrame a = GenerateFrame(123, {0.0, 0.0});
  MarginFrame b = GenerateFrame(123, {0.0, 0.0});
  REQUIRE(a.samples.size() == kMarginSamples);
  for (size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i] == b.samples[i]);
  }
  CHECK(a.demo == b.demo);
}

TEST_CASE("a shift translates every point by exactly the shift") {
  MarginFrame base = GenerateFrame(123, {0.0, 0.0});
  MarginFrame moved = GenerateFrame(123, {5.0, 5.0});
  for (size_t i = 0; i < base.samples.size(); ++i) {
    CHECK(moved.samples[i][0] == base.samples[i][0] + 5.0);
    CHECK(moved.samples[i][1] == base.samples[i][1] + 5.0);
  }
  CHECK(moved.demo[0] == base.demo[0] + 5.0);
  CHECK(moved.demo[1] == base.demo[1] + 5.0);
  CHECK(moved.clipped == base.clipped);
}

TEST_CASE("different seeds draw different clouds under the same rules") {
  MarginFrame a = GenerateFrame(1, {0.0, 0.0});
  MarginFrame b = GenerateFrame(2, {0.0, 0.0});
  CHECK(a.samples != b.samples);
  REQUIRE(b.samples.size() == kMarginSamples);
  for (const auto& p : b.samples) {
    CHECK(std::abs(p[0]) <= kMarginClipHalfWidth);
    CHECK(std::abs(p[1]) <= kMarginClipHalfWidth);
  }
}

TEST_CASE("optimal direction has unit norm and beats the flat sweep oracle") {
  MarginFrame frame = GenerateFrame(9, {0.0, 0.0});
  DirectionResult r = OptimalDirection({frame});
  double norm = std::hypot(r.direction[0], r.direction[1]);
  CHECK(std::abs(norm - 1.0) < 1e-12);

  double oracle_theta = SweepOracleAngle({frame});
  Vec2 oracle_dir{std::cos(oracle_theta), std::sin(oracle_theta)};
  // Refinement can only improve on the flat scan.
  CHECK(r.margin >= MarginOfDirection(frame, oracle_dir) - 1e-12);
  CHECK(AngleDeg(r.direction, oracle_dir) < 1.0);
}

TEST_CASE("samples clustered left of the demo give a near-horizontal direction") {
  MarginFrame frame = HandmadeFrame(8.0, 0.0);
  DirectionResult r = OptimalDirection({frame});
  CHECK(r.margin > 0.0);
  CHECK(AngleDeg(r.direction, Vec2{1.0, 0.0}) < 1.0);
}

TEST_CASE("translating a frame leaves its optimal direction unchanged") {
  MarginFrame base = GenerateFrame(77, {0.0, 0.0});
  MarginFrame moved = GenerateFrame(77, {200.0, -120.0});
  DirectionResult a = OptimalDirection({base});
  DirectionResult b = OptimalDirection({moved});
  CHECK(AngleDeg(a.direction, b.direction) < 1e-6);
  CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-9));
}

TEST_CASE("two translated copies pool to the same direction") {
  MarginFrame f1 = GenerateFrame(55, {0.0, 0.0});
  MarginFrame f2 = GenerateFrame(55, {40.0, 25.0});
  DirectionResult single = OptimalDirection({f1});
  DirectionResult pooled = OptimalDirection({f1, f2});
  CHECK(AngleDeg(single.direction, pooled.direction) < 1e-6);
}

TEST_CASE("demo surrounded by samples flags a negative margin") {
  MarginFrame f;
  for (int i = 0; i < kMarginSamples; ++i) {
    double theta = 2.0 * std::numbers::pi * i / kMarginSamples;
    f.samples.push_back(Vec2{3.0 * std::cos(theta), 3.0 * std::sin(theta)});
  }
  f.demo = {0.0, 0.0};
  DirectionResult r = OptimalDirection({f});
  CHECK(r.negative_margin);
  CHECK(r.margin < 0.0);
}

TEST_CASE("pooling only adds constraints: pooled margin <= each frame optimum") {
  MarginFrame f1 = GenerateFrame(5, {0.0, 0.0});
  MarginFrame f2 = GenerateFrameWithDemoOffset(6, {10.0, 5.0}, {5.0, 58.0});
  DirectionResult d1 = OptimalDirection({f1});
  DirectionResult d2 = OptimalDirection({f2});
  DirectionResult pooled = OptimalDirection({f1, f2});
  CHECK(pooled.margin <= d1.margin + 1e-12);
  CHECK(pooled.margin <= d2.margin + 1e-12);
  // Inside each frame the pooled direction cannot beat the frame's own
  // optimum.
  CHECK(MarginOfDirection(f1, pooled.direction) <= d1.margin + 1e-12);
  CHECK(MarginOfDirection(f2, pooled.direction) <= d2.margin + 1e-12);
}

TEST_CASE("the two-frame report reproduces the pooled-degradation geometry") {
  ShiftReport report = MakeShiftReport(2026);
  CHECK(report.dir1.margin > 0.0);
  CHECK(report.dir2.margin > 0.0);
  CHECK_FALSE(report.dir1.negative_margin);
  CHECK_FALSE(report.dir2.negative_margin);
  CHECK(report.angle_pooled_to_1_deg > 10.0);
  CHECK(report.angle_pooled_to_2_deg > 10.0);
  bool degraded_somewhere = report.pooled_margin_in_1 < report.dir1.margin ||
                            report.pooled_margin_in_2 < report.dir2.margin;
  CHECK(degraded_somewhere);
}

TEST_CASE("report CSVs carry 202 points and 3 directions") {
  ShiftReport report = MakeShiftReport(11);
  WritePointsCsv(report, "test_points.csv");
  WriteDirectionsCsv(report, "test_directions.csv");

  std::ifstream pin("test_points.csv");
  std::string line;
  int lines = 0;
  std::getline(pin, line);
  CHECK(line == "frame_id,x,y,is_demo");
  int demos = 0;
  while (std::getline(pin, line)) {
    ++lines;
    if (line.size() >= 2 && line.substr(line.size() - 2) == ",1") ++demos;
  }
  CHECK(lines == 2 * (kMarginSamples + 1));
  CHECK(demos == 2);

  std::ifstream din("test_directions.csv");
  std::getline(din, line);
  CHECK(line == "name,dx,dy,margin");
  lines = 0;
  while (std::getline(din, line)) ++lines;
  CHECK(lines == 3);

  std::remove("test_points.csv");
  std::remove("test_directions.csv");
}
