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
#include <vector>

#include "trackcast/atcn/encoder.hpp"
#include "trackcast/ingest/sample.hpp"
#include "trackcast/model/batch.hpp"
#include "trackcast/model/config.hpp"
#include "trackcast/num/checkpoint.hpp"
#include "trackcast/num/layers.hpp"

namespace trackcast::model {

/// Neighbour and ego ATCN encoders, grid pooling over neighbour summaries, a
/// dense remap of the ego encoding and an LSTM decoder initialised from the
/// joint context. Predictions are ego-relative positions in meters.
class TrajectoryModel {
 public:
  TrajectoryModel(ModelConfig config, std::uint64_t seed);

  /// [B x horizon x 2] meters.
  num::Tensor forward(const Batch& batch, num::Mode mode);
  /// Eval-mode prediction for one sample: horizon (x, y) pairs.
  std::vector<ingest::Position> predict(const ingest::TrajectorySample& sample);

  const ModelConfig& config() const { return config_; }
  std::uint64_t config_hash() const { return hash_; }

  /// Stable order; names are unique.
  num::ParameterList parameters() const;
  std::vector<num::NamedStats> running_stats();
  std::size_t parameter_count() const;

  /// Parameters plus running statistics under names "<stat>.mean" / "<stat>.var".
  num::Checkpoint to_checkpoint();
  /// Throws ConfigMismatchError on a different config hash, InputError on
  /// missing or misshapen records.
  void load(const num::Checkpoint& checkpoint);

  atcn::AtcnEncoder& neighbor_encoder() { return neighbor_; }
  atcn::AtcnEncoder& ego_encoder() { return ego_; }

 private:
  num::Tensor encode_grid(const Batch& batch, num::Mode mode);

  ModelConfig config_;
  std::uint64_t hash_;
  atcn::AtcnEncoder neighbor_;
  atcn::AtcnEncoder ego_;
  num::Conv2dLayer grid_conv1_;
  num::Conv2dLayer grid_conv2_;
  num::DenseLayer ego_dense_;
  num::DenseLayer init_h_;
  num::DenseLayer init_c_;
  num::LstmLayer lstm_;
  num::DenseLayer head_;
};

}  // namespace trackcast::model
