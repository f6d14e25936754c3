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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "trackcast/model/config.hpp"
#include "trackcast/train/trainer.hpp"

namespace trackcast::cli {

namespace fs = std::filesystem;

/// Contents of a --config file: {"model": {...}, "train": {...}}, both optional.
struct RunConfig {
  model::ModelConfig model;
  train::TrainConfig train;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);
/// Defaults when `path` is empty.
RunConfig load_run_config(const fs::path& path);

/// Flags shared by the commands that build a model.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> pad_mode;  ///< causal | symmetric
  std::optional<std::string> loss;      ///< mse | smooth-l1
  std::optional<std::size_t> epochs;
};
void apply(const Overrides& overrides, RunConfig& config);

struct IngestOptions {
  std::vector<fs::path> inputs;
  fs::path out;
  std::size_t stride = 1;
  std::string format = "binary";
  std::uint64_t seed = 1;
};

struct TrainOptions {
  fs::path data;
  fs::path config;
  fs::path out;
  fs::path resume;
  Overrides overrides;
};

struct EvalOptions {
  fs::path checkpoint;
  fs::path data;
  fs::path config;
  fs::path out;
  std::string split = "test";
};

struct PredictOptions {
  fs::path checkpoint;
  fs::path data;
  fs::path config;
  fs::path out;
  std::string split = "test";
  std::size_t sample = 0;
};

struct ComplexityOptions {
  fs::path config;
  fs::path out;
  std::size_t neighbors = 1;
  Overrides overrides;
};

struct SynthOptions {
  fs::path out;
  std::size_t vehicles = 60;
  std::size_t frames = 200;
  std::uint64_t seed = 7;
};

// Each returns a process exit code; failures surface as exceptions that run()
// maps to codes.
int cmd_ingest(const IngestOptions& options, std::ostream& out, std::ostream& err);
int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& options, std::ostream& out);
int cmd_predict(const PredictOptions& options, std::ostream& out);
int cmd_complexity(const ComplexityOptions& options, std::ostream& out);
int cmd_synth(const SynthOptions& options, std::ostream& out);
int cmd_init_config(const fs::path& out_path, std::ostream& out);

}  // namespace trackcast::cli
