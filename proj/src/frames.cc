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

#include "autotune/frames.h"

#include <fstream>

namespace autotune {

namespace {

nlohmann::json BlockToJson(const FeatureBlock& block) {
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 0; k < kNumTimePoints; ++k) {
    rows.push_back(std::vector<double>(block[k].begin(), block[k].end()));
  }
  return rows;
}

FeatureBlock BlockFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kNumTimePoints) {
    throw ParseError("feature block must hold 18 rows");
  }
  FeatureBlock block;
  for (int k = 0; k < kNumTimePoints; ++k) {
    auto row = j[static_cast<size_t>(k)].get<std::vector<double>>();
    if (row.size() != kNumFeatures) {
      throw ParseError("feature row must hold 21 channels");
    }
    std::copy(row.begin(), row.end(), block[k].begin());
  }
  return block;
}

}  // namespace

nlohmann::json ToJson(const FrameRecord& frame) {
  nlohmann::json j{{"format_version", kFramesFormatVersion},
                   {"scenario_id", frame.scenario_id},
                   {"split", frame.split},
                   {"time_grid", frame.time_grid},
                   {"expert", ToJson(frame.expert)}};
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : frame.samples) samples.push_back(ToJson(s));
  j["samples"] = std::move(samples);
  if (frame.expert_features.has_value()) {
    j["expert_features"] = BlockToJson(*frame.expert_features);
  }
  if (frame.sample_features.has_value()) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : *frame.sample_features) blocks.push_back(BlockToJson(b));
    j["sample_features"] = std::move(blocks);
  }
  return j;
}

FrameRecord FrameRecordFromJson(const nlohmann::json& j) {
  FrameRecord frame;
  try {
    int version = j.value("format_version", kFramesFormatVersion);
    if (version != kFramesFormatVersion) {
      throw ParseError("unsupported frames format version " + std::to_string(version));
    }
    frame.scenario_id = j.at("scenario_id").get<std::string>();
    frame.split = j.value("split", "train");
    frame.time_grid = j.at("time_grid").get<std::vector<double>>();
    frame.expert = TrajectoryFromJson(j.at("expert"));
    for (const auto& s : j.at("samples")) frame.samples.push_back(TrajectoryFromJson(s));
    if (j.contains("expert_features")) {
      frame.expert_features = BlockFromJson(j.at("expert_features"));
    }
    if (j.contains("sample_features")) {
      std::vector<FeatureBlock> blocks;
      for (const auto& b : j.at("sample_features")) blocks.push_back(BlockFromJson(b));
      frame.sample_features = std::move(blocks);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad frame: ") + e.what());
  }
  if (frame.samples.empty()) {
    throw ParseError("frame must carry at least one sampled trajectory");
  }
  return frame;
}

void WriteFrames(const std::vector<FrameRecord>& frames, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  for (const auto& frame : frames) {
    out << ToJson(frame).dump() << "\n";
  }
}

std::vector<FrameRecord> ReadFrames(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open frames file: " + path);
  std::vector<FrameRecord> frames;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      frames.push_back(FrameRecordFromJson(j));
    } catch (const std::exception& e) {
      throw ParseError(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return frames;
}

}  // namespace autotune
