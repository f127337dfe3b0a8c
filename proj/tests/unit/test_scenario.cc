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

#include "autotune/scenario.h"
#include "test_util.h"

using namespace autotune;
using namespace autotune::testutil;

TEST_CASE("path interpolation is linear inside and clamped outside") {
  PathProfile p;
  p.station = {0.0, 10.0, 20.0};
  p.curvature = {0.0, 0.02, 0.02};
  p.speed_limit = {10.0, 10.0, 5.0};
  p.l = {0.0, 1.0, 1.0};
  p.dl = {0.0, 0.0, 0.0};
  p.ddl = {0.0, 0.0, 0.0};
  p.Validate();

  CHECK(p.CurvatureAt(5.0) == doctest::Approx(0.01));
  CHECK(p.SpeedLimitAt(15.0) == doctest::Approx(7.5));
  CHECK(p.LateralAt(2.5) == doctest::Approx(0.25));
  // Clamped beyond both ends.
  CHECK(p.CurvatureAt(-3.0) == 0.0);
  CHECK(p.CurvatureAt(99.0) == 0.02);
  CHECK(p.SpeedLimitAt(99.0) == 5.0);
  // Interpolant slope: right-continuous inside, zero in clamped regions.
  CHECK(p.CurvatureSlopeAt(5.0) == doctest::Approx(0.002));
  CHECK(p.CurvatureSlopeAt(15.0) == doctest::Approx(0.0));
  CHECK(p.CurvatureSlopeAt(-1.0) == 0.0);
  CHECK(p.CurvatureSlopeAt(25.0) == 0.0);
}

TEST_CASE("path profile validation rejects bad shapes") {
  PathProfile p = StraightPath();
  SUBCASE("non-increasing station grid") {
    p.station = {0.0, 0.0};
    CHECK_THROWS_AS(p.Validate(), ContractError);
  }
  SUBCASE("length mismatch") {
    p.curvature = {0.0};
    CHECK_THROWS_AS(p.Validate(), ContractError);
  }
  SUBCASE("non-positive speed limit") {
    p.speed_limit = {10.0, 0.0};
    CHECK_THROWS_AS(p.Validate(), ContractError);
  }
}

TEST_CASE("scenario validation enforces the grid and initial state") {
  Scenario sc = BareScenario();
  sc.Validate();
  SUBCASE("17-point grid rejected") {
    sc.time_grid.pop_back();
    CHECK_THROWS_AS(sc.Validate(), ContractError);
  }
  SUBCASE("grid must start at zero") {
    sc.time_grid[0] = 0.1;
    CHECK_THROWS_AS(sc.Validate(), ContractError);
  }
  SUBCASE("negative v0 rejected") {
    sc.v0 = -1.0;
    CHECK_THROWS_AS(sc.Validate(), ContractError);
  }
  SUBCASE("obstacle with inverted slice rejected") {
    Obstacle ob;
    ob.kind = ObstacleKind::kFollow;
    ob.slices.assign(kNumTimePoints, StSlice{5.0, 4.0, 1.0});
    sc.obstacles.push_back(ob);
    CHECK_THROWS_AS(sc.Validate(), ContractError);
  }
}

TEST_CASE("trajectory validation pins times, monotone station, v >= 0") {
  Scenario sc = BareScenario();
  Trajectory tr = ConstantSpeedTrajectory(sc, 10.0);
  tr.Validate(sc);
  SUBCASE("off-grid time") {
    tr.points[3].t += 1e-6;
    CHECK_THROWS_AS(tr.Validate(sc), ContractError);
  }
  SUBCASE("reversing station") {
    tr.points[5].s = tr.points[4].s - 1.0;
    CHECK_THROWS_AS(tr.Validate(sc), ContractError);
  }
  SUBCASE("negative speed") {
    tr.points[5].v = -0.5;
    CHECK_THROWS_AS(tr.Validate(sc), ContractError);
  }
}

TEST_CASE("scenario JSON round trip preserves every field") {
  Scenario sc = BareScenario();
  Obstacle follow = ConstantVelocityObstacle(ObstacleKind::kFollow, 30.0, 5.0, 5.0,
                                             sc.time_grid);
  Obstacle stop;
  stop.kind = ObstacleKind::kStop;
  stop.station = 50.0;
  Obstacle nudge = ConstantVelocityObstacle(ObstacleKind::kNudge, 20.0, 6.0, 0.5,
                                            sc.time_grid);
  nudge.lateral_gap = -1.5;
  // A crossing obstacle with a partial window exercises absent slices.
  Obstacle crossing;
  crossing.kind = ObstacleKind::kOvertake;
  crossing.slices.assign(kNumTimePoints, std::nullopt);
  crossing.slices[4] = StSlice{40.0, 44.0, 2.0};
  sc.obstacles = {follow, stop, nudge, crossing};
  sc.Validate();

  Scenario back = ScenarioFromJson(ToJson(sc));
  CHECK(back.id == sc.id);
  CHECK(back.seed == sc.seed);
  CHECK(back.v0 == sc.v0);
  CHECK(back.time_grid == sc.time_grid);
  CHECK(back.path.station == sc.path.station);
  CHECK(back.path.speed_limit == sc.path.speed_limit);
  REQUIRE(back.obstacles.size() == 4);
  CHECK(back.obstacles[0].kind == ObstacleKind::kFollow);
  CHECK(back.obstacles[0].slices[4]->s_rear == follow.slices[4]->s_rear);
  CHECK(back.obstacles[1].station == 50.0);
  CHECK(back.obstacles[2].lateral_gap == -1.5);
  CHECK_FALSE(back.obstacles[3].slices[3].has_value());
  CHECK(back.obstacles[3].slices[4]->s_front == 44.0);
}

TEST_CASE("suite save/load round trip and error reporting") {
  Scenario sc = BareScenario();
  std::string path = "test_suite_roundtrip.json";
  SaveSuite({sc, sc}, path);
  auto suite = LoadSuite(path);
  REQUIRE(suite.size() == 2);
  CHECK(suite[0].id == sc.id);
  CHECK(suite[1].time_grid == sc.time_grid);

  std::remove(path.c_str());
  CHECK_THROWS_AS(LoadSuite(path), ParseError);
}

TEST_CASE("trajectory JSON round trip is exact") {
  Scenario sc = BareScenario();
  Trajectory tr = ConstantSpeedTrajectory(sc, 7.25);
  tr.points[3].a = 1.5;
  tr.points[3].j = -0.75;
  Trajectory back = TrajectoryFromJson(ToJson(tr));
  REQUIRE(back.points.size() == tr.points.size());
  for (size_t k = 0; k < tr.points.size(); ++k) {
    CHECK(back.points[k].t == tr.points[k].t);
    CHECK(back.points[k].s == tr.points[k].s);
    CHECK(back.points[k].v == tr.points[k].v);
    CHECK(back.points[k].a == tr.points[k].a);
    CHECK(back.points[k].j == tr.points[k].j);
  }
  CHECK(back.provenance == tr.provenance);
}
