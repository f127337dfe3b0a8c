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

#include "autotune/manifest.h"

#include <openssl/evp.h>

#include <fstream>

#include "autotune/common.h"

namespace autotune {

std::string Sha256Bytes(const void* data, size_t size) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data, size, digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericError("sha256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(static_cast<size_t>(len) * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string Sha256File(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open for digest: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return Sha256Bytes(bytes.data(), bytes.size());
}

void RunManifest::AddInput(const std::string& path) {
  inputs.emplace_back(path, Sha256File(path));
}

void RunManifest::Write(const std::string& primary_output) const {
  nlohmann::json in = nlohmann::json::array();
  for (const auto& [path, digest] : inputs) {
    in.push_back({{"path", path}, {"sha256", digest}});
  }
  nlohmann::json j{{"command", command},
                   {"tool_version", tool_version},
                   {"seed", seed},
                   {"config", config},
                   {"inputs", std::move(in)},
                   {"outputs", outputs}};
  std::string path = primary_output + ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << j.dump(1) << "\n";
}

}  // namespace autotune
