// Copyright (c) 2026 The carplan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "carplan/json_io.hpp"
#include "carplan/version.hpp"

namespace carplan {

/// FNV-1a over raw bytes; cheap content digest for input provenance.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

/// Everything needed to reproduce a CLI run: the exact invocation, the full
/// parameter snapshot (seeds included), digests of the input files, the
/// tool version, the files written, and phase timings.
struct RunManifest {
  std::string command_line;
  ordered_json config = ordered_json::object();
  std::vector<std::pair<std::string, std::string>> inputs;  ///< path, digest
  std::vector<std::string> outputs;
  ordered_json timings = ordered_json::object();

  void add_input(const std::string& path, const std::string& content) {
    inputs.emplace_back(path, fnv1a64_hex(content));
  }
};

inline ordered_json manifest_to_json(const RunManifest& m) {
  ordered_json doc;
  doc["tool"] = "carplan";
  doc["version"] = kVersionString;
  doc["command_line"] = m.command_line;
  doc["config"] = m.config;
  doc["inputs"] = ordered_json::array();
  for (const auto& [path, digest] : m.inputs) {
    doc["inputs"].push_back(ordered_json{{"path", path}, {"fnv1a64", digest}});
  }
  doc["outputs"] = m.outputs;
  doc["timings_ms"] = m.timings;
  return doc;
}

/// Write the manifest next to the primary output file.
inline Result<void> write_manifest(const RunManifest& m,
                                   const std::string& primary_output) {
  return write_text_file(primary_output + ".manifest.json",
                         manifest_to_json(m).dump(2) + "\n");
}

}  // namespace carplan
