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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "trackcast/ingest/sample.hpp"
#include "trackcast/model/trajectory_model.hpp"

namespace trackcast::train {

/// Prediction horizons reported, in decoder steps (5 Hz, so 1 s .. 5 s).
inline constexpr std::array<std::size_t, 5> kHorizonSteps{5, 10, 15, 20, 25};

struct EvalReport {
  /// RMSE of the Euclidean displacement error at 1..5 s, meters.
  std::array<double, 5> rmse{};
  /// Mean of the five horizon RMSE values.
  double ade = 0.0;
  std::size_t samples = 0;
};

using Trajectory = std::vector<ingest::Position>;

/// rmse[h] = sqrt(mean_i |pred_i(t_h) - truth_i(t_h)|^2) over samples.
/// Throws ConfigError on empty input or trajectories shorter than 25 steps.
EvalReport evaluate_predictions(std::span<const Trajectory> predictions,
                                std::span<const Trajectory> truths);

/// Eval-mode model predictions over `samples`, batched.
EvalReport evaluate(model::TrajectoryModel& model, std::span<const ingest::TrajectorySample> samples,
                    std::size_t batch_size = 128);

/// Baseline that keeps the vehicle at its t0 position.
EvalReport evaluate_constant_position(std::span<const ingest::TrajectorySample> samples);

}  // namespace trackcast::train
