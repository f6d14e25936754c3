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

#include "trackcast/num/tensor.hpp"

namespace trackcast::num {

enum class Mode { kTrain, kEval };

/// Per-channel running statistics. Empty until the first training pass (or an
/// explicit assignment such as a checkpoint load).
struct BatchNormStats {
  std::vector<double> mean;
  std::vector<double> var;

  bool initialized() const { return !mean.empty(); }
};

struct BatchNormOptions {
  double momentum = 0.1;
  double epsilon = 1e-5;
};

/// Normalizes over every axis except axis 1 (channels). x is [N x C],
/// [N x C x T] or [N x C x H x W]; gamma/beta are [C].
///
/// Train mode uses biased batch statistics and folds the unbiased batch
/// variance into `stats` with the given momentum. Eval mode reads `stats` and
/// throws ConfigError when none exist yet.
Tensor batch_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, BatchNormStats& stats,
                  Mode mode, BatchNormOptions options = {});

}  // namespace trackcast::num
