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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "trackcast/ingest/sample.hpp"
#include "trackcast/model/trajectory_model.hpp"
#include "trackcast/num/adam.hpp"
#include "trackcast/num/checkpoint.hpp"
#include "trackcast/train/loss.hpp"

namespace trackcast::train {

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  double clip = 10.0;
  num::ClipMode clip_mode = num::ClipMode::kGlobalNorm;
  /// The rate is multiplied by plateau_factor once `plateau_patience`
  /// consecutive epochs fail to lower the best validation loss by more than
  /// `plateau_threshold`.
  double plateau_factor = 0.1;
  std::size_t plateau_patience = 2;
  double plateau_threshold = 1e-4;
  LossKind loss = LossKind::kMse;
  /// Seeds weight initialisation and per-epoch shuffling.
  std::uint64_t seed = 1;

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);

struct PlateauState {
  double best = std::numeric_limits<double>::infinity();
  std::size_t bad_epochs = 0;
  std::size_t reductions = 0;
};

/// Records one validation loss; returns true when it set a new best. Reduces
/// `lr` in place when the plateau rule fires.
bool plateau_update(PlateauState& state, double val_loss, const TrainConfig& config, double& lr);

struct EpochRecord {
  std::size_t epoch = 0;  ///< 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;        ///< rate used during the epoch
  bool improved = false;
};

struct TrainState {
  std::size_t epochs_done = 0;
  num::AdamState adam;
  PlateauState plateau;
  std::vector<EpochRecord> history;
  /// Weights (and running statistics) with the lowest validation loss so far.
  std::optional<num::Checkpoint> best;
};

enum class TrainStatus { kCompleted, kDiverged };

struct TrainResult {
  TrainStatus status = TrainStatus::kCompleted;
  std::string message;
  TrainState state;
};

struct TrainHooks {
  /// Called after every completed epoch, once state.best is up to date.
  std::function<void(const EpochRecord&, const TrainState&, model::TrajectoryModel&)> on_epoch;
};

/// Runs epochs up to config.epochs, continuing from `state`. The validation
/// loss drives the plateau rule and best-weight tracking; an empty validation
/// set falls back to the training loss. A non-finite loss or gradient stops
/// training with TrainStatus::kDiverged and leaves state.best untouched. On
/// completion the model holds the best weights.
TrainResult train(model::TrajectoryModel& model, std::span<const ingest::TrajectorySample> train_set,
                  std::span<const ingest::TrajectorySample> val_set, const TrainConfig& config,
                  TrainState state = {}, const TrainHooks& hooks = {});

/// Mean loss over `samples` in eval mode.
double dataset_loss(model::TrajectoryModel& model, std::span<const ingest::TrajectorySample> samples,
                    LossKind kind, std::size_t batch_size);

/// Model weights plus optimizer moments, epoch counter, plateau state and
/// history, for resuming.
num::Checkpoint resume_checkpoint(model::TrajectoryModel& model, const TrainState& state);
/// Loads weights into `model` and returns the saved training state (without
/// `best`). Throws InputError when the checkpoint carries no training state.
TrainState restore_resume_checkpoint(model::TrajectoryModel& model, const num::Checkpoint& ckpt);

}  // namespace trackcast::train
