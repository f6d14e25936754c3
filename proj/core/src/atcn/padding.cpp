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

#include "trackcast/atcn/padding.hpp"

#include <cstdint>

namespace trackcast::atcn {

std::size_t required_padding(std::size_t o, std::size_t i, std::size_t s, std::size_t k,
                             std::size_t d) {
  const auto so = static_cast<std::int64_t>(o);
  const auto si = static_cast<std::int64_t>(i);
  const auto ss = static_cast<std::int64_t>(s);
  const auto sk = static_cast<std::int64_t>(k);
  const auto sd = static_cast<std::int64_t>(d);
  const std::int64_t numerator = (so - 1) * ss + (sk - 1) * (sd - 1) - si + sk;
  if (numerator <= 0) return 0;
  return static_cast<std::size_t>((numerator + 1) / 2);
}

std::size_t receptive_field(const AtcnConfig& config) {
  std::size_t rf = 1;
  for (std::size_t l = 0; l < config.layers(); ++l) {
    rf += (config.kernel_sizes[l] - 1) * config.dilations[l];
  }
  return rf;
}

}  // namespace trackcast::atcn
