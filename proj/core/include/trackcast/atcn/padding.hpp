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

#include "trackcast/atcn/config.hpp"

namespace trackcast::atcn {

/// Per-side zero padding for output length o from input length i at stride s,
/// kernel size k and dilation d:
///   p = ceil(((o - 1) * s + (k - 1) * (d - 1) - i + k) / 2)
/// Negative results clamp to 0.
std::size_t required_padding(std::size_t o, std::size_t i, std::size_t s, std::size_t k,
                             std::size_t d);

/// rf = 1 + sum_l (k(l) - 1) * d(l) over the configured layers. Separable
/// blocks contribute through their depthwise stage only.
std::size_t receptive_field(const AtcnConfig& config);

}  // namespace trackcast::atcn
