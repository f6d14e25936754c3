/* Copyright 2026 The trackcast Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace trackcast::cli {

/// Provenance record written as manifest.json into every artifact directory.
struct RunManifest {
  std::string command;
  std::optional<std::uint64_t> config_hash;
  std::optional<std::uint64_t> dataset_fingerprint;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;  ///< file names relative to the directory
  std::string started;               ///< UTC, ISO-8601
  std::string finished;
};

std::string utc_timestamp();
/// Manifest for `command` with the start time filled in.
RunManifest start_manifest(std::string command);
nlohmann::json to_json(const RunManifest& manifest);
/// Overwrites <dir>/manifest.json, so a directory never holds more than one.
void write_manifest(const std::filesystem::path& dir, RunManifest manifest);

}  // namespace trackcast::cli
