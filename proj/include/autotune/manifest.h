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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace autotune {

// Hex SHA-256 of a file's bytes.
std::string Sha256File(const std::string& path);
std::string Sha256Bytes(const void* data, size_t size);

// Every artifact-producing command writes one manifest next to its
// outputs: command, resolved config, seed, input digests, output list.
// No timestamps, so a re-run with the same inputs reproduces it.
struct RunManifest {
  std::string command;
  std::string tool_version;
  uint64_t seed = 0;
  nlohmann::json config;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::vector<std::string> outputs;

  void AddInput(const std::string& path);
  // Written to `<primary_output>.manifest.json`.
  void Write(const std::string& primary_output) const;
};

}  // namespace autotune
