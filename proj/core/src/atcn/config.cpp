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

#include "trackcast/atcn/config.hpp"

#include <algorithm>
#include <string>

#include "trackcast/errors.hpp"

namespace trackcast::atcn {

std::size_t AtcnConfig::block_input_channels(std::size_t block) const {
  return block == 0 ? input_channels : layer_output_channels[block - 1];
}

std::size_t AtcnConfig::separable_width(std::size_t block) const {
  return std::max<std::size_t>(1, block_input_channels(block) / separable_width_divisor);
}

void AtcnConfig::validate() const {
  const std::size_t n = layer_output_channels.size();
  if (n == 0) throw ConfigError("ATCN config needs at least one layer");
  if (dilations.size() != n || kernel_sizes.size() != n) {
    throw ConfigError("ATCN config lists must have equal length (" + std::to_string(n) + ")");
  }
  if (input_channels == 0 || separable_width_divisor == 0) {
    throw ConfigError("ATCN input channels and separable width divisor must be positive");
  }
  auto zero = [](std::size_t v) { return v == 0; };
  if (std::any_of(kernel_sizes.begin(), kernel_sizes.end(), zero) ||
      std::any_of(dilations.begin(), dilations.end(), zero) ||
      std::any_of(layer_output_channels.begin(), layer_output_channels.end(), zero)) {
    throw ConfigError("ATCN kernel sizes, dilations and widths must be >= 1");
  }
}

AtcnConfig neighbor_encoder_config() {
  AtcnConfig c;
  c.layer_output_channels = {16, 32, 64};
  c.dilations = {1, 1, 1};
  c.kernel_sizes = {2, 2, 2};
  return c;
}

AtcnConfig ego_encoder_config() {
  AtcnConfig c;
  c.layer_output_channels = {8, 16, 32};
  c.dilations = {1, 1, 1};
  c.kernel_sizes = {2, 2, 2};
  return c;
}

}  // namespace trackcast::atcn
