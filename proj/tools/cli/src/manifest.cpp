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

#include "trackcast/cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

#include "trackcast/errors.hpp"
#include "trackcast/model/config.hpp"

#ifndef TRACKCAST_VERSION
#define TRACKCAST_VERSION "unknown"
#endif

namespace trackcast::cli {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest start_manifest(std::string command) {
  RunManifest m;
  m.command = std::move(command);
  m.started = utc_timestamp();
  return m;
}

nlohmann::json to_json(const RunManifest& m) {
  auto hex = [](const std::optional<std::uint64_t>& v) -> nlohmann::json {
    return v ? nlohmann::json(model::hash_string(*v)) : nlohmann::json(nullptr);
  };
  return {
      {"tool", "trackcast"},
      {"toolVersion", TRACKCAST_VERSION},
      {"command", m.command},
      {"configHash", hex(m.config_hash)},
      {"datasetFingerprint", hex(m.dataset_fingerprint)},
      {"seed", m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr)},
      {"inputs", m.inputs},
      {"outputs", m.outputs},
      {"timestamps", {{"started", m.started}, {"finished", m.finished}}},
  };
}

void write_manifest(const std::filesystem::path& dir, RunManifest manifest) {
  if (manifest.finished.empty()) manifest.finished = utc_timestamp();
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << to_json(manifest).dump(2) << '\n';
  if (!out) throw InputError("cannot write " + (dir / "manifest.json").string());
}

}  // namespace trackcast::cli
