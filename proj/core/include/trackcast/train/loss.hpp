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

#include <string>

#include "trackcast/num/tensor.hpp"

namespace trackcast::train {

enum class LossKind { kMse, kSmoothL1 };

const char* to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& text);

/// Mean over all elements of the per-element loss between prediction and
/// target (same shape). Smooth L1 uses beta = 1 m. Throws ConfigError on shape
/// mismatch and NumericError when either input holds a non-finite value.
num::Tensor trajectory_loss(const num::Tensor& prediction, const num::Tensor& target,
                            LossKind kind);

}  // namespace trackcast::train
