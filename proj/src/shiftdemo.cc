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

#include "autotune/shiftdemo.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "autotune/common.h"
#include "autotune/rng.h"

namespace autotune {

namespace {

constexpr int kSweepAngles = 3600;

// Demonstration offsets sit outside the clip box, so a positive margin
// always exists for a single frame.
constexpr Vec2 kDefaultDemoOffset{200.0, 20.0};

double Clip(double x) {
  return std::clamp(x, -kMarginClipHalfWidth, kMarginClipHalfWidth);
}

double MarginAtAngle(const std::vector<MarginFrame>& frames, double theta) {
  double c = std::cos(theta);
  double s = std::sin(theta);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& frame : frames) {
    for (const auto& p : frame.samples) {
      double m = c * (frame.demo[0] - p[0]) + s * (frame.demo[1] - p[1]);
      worst = std::min(worst, m);
    }
  }
  return worst;
}

}  // namespace

MarginFrame GenerateFrameWithDemoOffset(uint64_t seed, Vec2 shift, Vec2 demo_offset) {
  Rng rng(SubstreamSeed(seed, "margin-frame"));
  MarginFrame frame;
  frame.shift = shift;
  frame.samples.reserve(kMarginSamples);
  for (int i = 0; i < kMarginSamples; ++i) {
    double x = rng.Cauchy();
    double y = rng.Cauchy();
    double cx = Clip(x);
    double cy = Clip(y);
    if (cx != x || cy != y) ++frame.clipped;
    frame.samples.push_back(Vec2{cx + shift[0], cy + shift[1]});
  }
  frame.demo = Vec2{demo_offset[0] + shift[0], demo_offset[1] + shift[1]};
  return frame;
}

MarginFrame GenerateFrame(uint64_t seed, Vec2 shift) {
  return GenerateFrameWithDemoOffset(seed, shift, kDefaultDemoOffset);
}

double MarginOfDirection(const MarginFrame& frame, const Vec2& direction) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& p : frame.samples) {
    worst = std::min(worst, direction[0] * (frame.demo[0] - p[0]) +
                                direction[1] * (frame.demo[1] - p[1]));
  }
  return worst;
}

DirectionResult OptimalDirection(const std::vector<MarginFrame>& frames) {
  if (frames.empty()) throw ContractError("margin direction needs at least one frame");
  for (const auto& f : frames) {
    if (static_cast<int>(f.samples.size()) != kMarginSamples) {
      throw ContractError("margin frame must hold exactly 100 samples");
    }
  }

  const double two_pi = 2.0 * std::numbers::pi;
  double best_theta = 0.0;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSweepAngles; ++i) {
    double theta = two_pi * i / kSweepAngles;
    double m = MarginAtAngle(frames, theta);
    if (m > best_margin) {
      best_margin = m;
      best_theta = theta;
    }
  }

  // Golden-section refinement on the bracketing interval around the
  // sweep maximum.
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_theta - two_pi / kSweepAngles;
  double hi = best_theta + two_pi / kSweepAngles;
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = MarginAtAngle(frames, x1);
  double f2 = MarginAtAngle(frames, x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = MarginAtAngle(frames, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = MarginAtAngle(frames, x1);
    }
  }
  double theta = 0.5 * (lo + hi);
  double margin = MarginAtAngle(frames, theta);
  if (margin < best_margin) {  // refinement never loses to the sweep
    theta = best_theta;
    margin = best_margin;
  }

  DirectionResult result;
  result.direction = Vec2{std::cos(theta), std::sin(theta)};
  result.margin = margin;
  result.negative_margin = !(margin > 0.0);
  return result;
}

namespace {

double AngleBetweenDeg(const Vec2& a, const Vec2& b) {
  double dot = a[0] * b[0] + a[1] * b[1];
  dot = std::clamp(dot, -1.0, 1.0);
  return std::acos(dot) * 180.0 / std::numbers::pi;
}

std::string FormatDouble(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

ShiftReport MakeShiftReport(uint64_t seed) {
  ShiftReport report;
  // Frame 1: demonstration east of the cloud, no background shift.
  report.frame1 = GenerateFrameWithDemoOffset(SubstreamSeed(seed, "frame1"),
                                              Vec2{0.0, 0.0}, kDefaultDemoOffset);
  // Frame 2: demonstration north of its cloud (different geometry, not a
  // rigid copy of frame 1) plus a rigid background shift.
  report.frame2 = GenerateFrameWithDemoOffset(SubstreamSeed(seed, "frame2"),
                                              Vec2{30.0, -20.0}, Vec2{30.0, 210.0});

  report.dir1 = OptimalDirection({report.frame1});
  report.dir2 = OptimalDirection({report.frame2});
  report.pooled = OptimalDirection({report.frame1, report.frame2});

  report.angle_pooled_to_1_deg = AngleBetweenDeg(report.pooled.direction, report.dir1.direction);
  report.angle_pooled_to_2_deg = AngleBetweenDeg(report.pooled.direction, report.dir2.direction);
  report.pooled_margin_in_1 = MarginOfDirection(report.frame1, report.pooled.direction);
  report.pooled_margin_in_2 = MarginOfDirection(report.frame2, report.pooled.direction);
  return report;
}

void WritePointsCsv(const ShiftReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << "frame_id,x,y,is_demo\n";
  auto dump = [&out](const MarginFrame& frame, int id) {
    for (const auto& p : frame.samples) {
      out << id << "," << FormatDouble(p[0]) << "," << FormatDouble(p[1]) << ",0\n";
    }
    out << id << "," << FormatDouble(frame.demo[0]) << "," << FormatDouble(frame.demo[1])
        << ",1\n";
  };
  dump(report.frame1, 1);
  dump(report.frame2, 2);
}

void WriteDirectionsCsv(const ShiftReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << "name,dx,dy,margin\n";
  auto dump = [&out](const char* name, const DirectionResult& d) {
    out << name << "," << FormatDouble(d.direction[0]) << ","
        << FormatDouble(d.direction[1]) << "," << FormatDouble(d.margin) << "\n";
  };
  dump("frame1", report.dir1);
  dump("frame2", report.dir2);
  dump("pooled", report.pooled);
}

nlohmann::json ToJson(const ShiftReport& report) {
  auto dir = [](const DirectionResult& d) {
    return nlohmann::json{{"dx", d.direction[0]},
                          {"dy", d.direction[1]},
                          {"margin", d.margin},
                          {"negative_margin", d.negative_margin}};
  };
  return nlohmann::json{{"frame1", dir(report.dir1)},
                        {"frame2", dir(report.dir2)},
                        {"pooled", dir(report.pooled)},
                        {"angle_pooled_to_1_deg", report.angle_pooled_to_1_deg},
                        {"angle_pooled_to_2_deg", report.angle_pooled_to_2_deg},
                        {"pooled_margin_in_1", report.pooled_margin_in_1},
                        {"pooled_margin_in_2", report.pooled_margin_in_2},
                        {"clipped", {{"frame1", report.frame1.clipped},
                                     {"frame2", report.frame2.clipped}}}};
}

}  // namespace autotune
