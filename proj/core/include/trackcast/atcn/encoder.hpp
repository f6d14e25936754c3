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
#include <string>
#include <vector>

#include "trackcast/atcn/config.hpp"
#include "trackcast/num/layers.hpp"

namespace trackcast::atcn {

/// Convolution followed by batch norm and the configured activation.
struct ConvUnit {
  num::Conv1dLayer conv;
  num::BatchNormLayer norm;
  bool pointwise = false;
};

/// Block 0 holds one standard unit. Later blocks hold pointwise, depthwise and
/// pointwise units (or a single standard unit when the config disables
/// separable blocks).
struct AtcnBlock {
  std::vector<ConvUnit> units;
};

class AtcnEncoder {
 public:
  AtcnEncoder() = default;
  AtcnEncoder(AtcnConfig config, num::Initializer& init, num::BatchNormOptions norm = {});

  /// x is [C_in x T] or [B x C_in x T]; returns the same layout with the final
  /// block width and T steps.
  num::Tensor forward(const num::Tensor& x, num::Mode mode);

  /// Final-step features of forward(): [C_out] or [B x C_out].
  num::Tensor encode_summary(const num::Tensor& x, num::Mode mode);

  /// Sets every unit to pass its input through: channel-embedding weights,
  /// tap 0 = 1, unit norm scale and running stats that normalize to identity.
  /// Requires non-decreasing widths, including the depthwise stage. Pair with
  /// Activation::kIdentity.
  void make_identity();

  void set_activation(Activation activation) { config_.activation = activation; }
  const AtcnConfig& config() const { return config_; }
  std::vector<AtcnBlock>& blocks() { return blocks_; }
  const std::vector<AtcnBlock>& blocks() const { return blocks_; }

  void collect(const std::string& prefix, num::ParameterList& out) const;
  void collect_stats(const std::string& prefix, std::vector<num::NamedStats>& out);

 private:
  num::Tensor run_unit(ConvUnit& unit, const num::Tensor& x, num::Mode mode) const;

  AtcnConfig config_;
  num::BatchNormOptions norm_;
  std::vector<AtcnBlock> blocks_;
};

}  // namespace trackcast::atcn
