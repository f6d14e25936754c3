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
#include <vector>

#include "trackcast/num/conv.hpp"

namespace trackcast::atcn {

enum class Activation { kSwish, kIdentity };

/// Layer plan of one ATCN encoder. Block 0 is a standard convolution; later
/// blocks are pointwise -> depthwise -> pointwise stacks (or standard
/// convolutions when `separable` is false, used for cost comparisons).
struct AtcnConfig {
  std::vector<std::size_t> layer_output_channels;
  std::vector<std::size_t> dilations;
  std::vector<std::size_t> kernel_sizes;
  std::size_t input_channels = 2;
  num::PadMode pad_mode = num::PadMode::kCausalLeft;
  /// Width of the depthwise stage is block input channels / divisor.
  std::size_t separable_width_divisor = 2;
  bool separable = true;
  Activation activation = Activation::kSwish;

  std::size_t layers() const { return layer_output_channels.size(); }
  std::size_t output_channels() const { return layer_output_channels.back(); }
  std::size_t block_input_channels(std::size_t block) const;
  std::size_t separable_width(std::size_t block) const;
  /// Throws ConfigError on empty or ragged lists, zero kernel/dilation/width.
  void validate() const;

  friend bool operator==(const AtcnConfig&, const AtcnConfig&) = default;
};

/// Neighbour encoder: channels [16, 32, 64], dilation 1, kernel 2.
AtcnConfig neighbor_encoder_config();
/// Ego encoder: channels [8, 16, 32], dilation 1, kernel 2.
AtcnConfig ego_encoder_config();

}  // namespace trackcast::atcn
