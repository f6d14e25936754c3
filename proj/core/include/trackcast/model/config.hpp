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
#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "trackcast/atcn/config.hpp"
#include "trackcast/num/batch_norm.hpp"
#include "trackcast/num/conv.hpp"

namespace trackcast::model {

struct GridConv {
  std::size_t in_channels = 64;
  std::size_t out_channels = 64;
  std::size_t kernel_h = 3;
  std::size_t kernel_w = 3;
  std::size_t pad_h = 0;
  std::size_t pad_w = 0;
  friend bool operator==(const GridConv&, const GridConv&) = default;
};

/// What the ego dense layer reads from the ego encoder.
enum class EgoDenseInput {
  kSequence,  ///< all T steps flattened (C_out * T inputs)
  kSummary,   ///< final step only (C_out inputs)
};

const char* to_string(EgoDenseInput input);
EgoDenseInput ego_dense_input_from_string(const std::string& text);

struct ModelConfig {
  atcn::AtcnConfig neighbor_atcn = atcn::neighbor_encoder_config();
  atcn::AtcnConfig ego_atcn = atcn::ego_encoder_config();

  std::size_t history_steps = 16;
  std::size_t horizon_steps = 25;
  std::size_t grid_rows = 13;
  std::size_t grid_cols = 3;

  GridConv grid_conv1{64, 64, 3, 3, 0, 0};
  GridConv grid_conv2{64, 16, 3, 1, 0, 0};
  num::PoolGeometry grid_pool{2, 1, 2, 1, 1, 0};

  EgoDenseInput ego_dense_input = EgoDenseInput::kSequence;
  std::size_t ego_dense_out = 80;

  std::size_t decoder_hidden = 108;
  std::size_t output_dim = 2;
  /// Feed the previous prediction back as the next decoder input instead of zeros.
  bool autoregressive = false;
  /// Positions are divided by this before encoding; predictions are multiplied by it.
  double position_scale = 10.0;
  num::BatchNormOptions batch_norm;

  /// Grid extents after each pooling stage.
  std::size_t conv1_rows() const;
  std::size_t conv1_cols() const;
  std::size_t conv2_rows() const;
  std::size_t conv2_cols() const;
  std::size_t pooled_rows() const;
  std::size_t pooled_cols() const;
  std::size_t grid_features() const;
  std::size_t ego_dense_in() const;
  std::size_t context_width() const;

  /// Throws ConfigError when widths do not chain or a stage collapses.
  void validate() const;

  friend bool operator==(const ModelConfig& a, const ModelConfig& b);
};

nlohmann::json to_json(const atcn::AtcnConfig& config);
atcn::AtcnConfig atcn_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelConfig& config);
/// Missing keys keep their defaults; unknown keys and bad values throw ConfigError.
ModelConfig model_config_from_json(const nlohmann::json& j);

/// FNV-1a 64 of the canonical (sorted-key, compact) JSON form.
std::uint64_t config_hash(const ModelConfig& config);
std::string hash_string(std::uint64_t hash);

}  // namespace trackcast::model
