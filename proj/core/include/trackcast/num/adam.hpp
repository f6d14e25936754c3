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
#include <string>
#include <vector>

#include "trackcast/num/layers.hpp"

namespace trackcast::num {

enum class ClipMode {
  kGlobalNorm,  ///< rescale all gradients when their joint L2 norm exceeds the limit
  kValue,       ///< clamp each gradient component to [-limit, limit]
  kNone,
};

const char* to_string(ClipMode mode);
ClipMode clip_mode_from_string(const std::string& text);

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip = 10.0;
  ClipMode clip_mode = ClipMode::kGlobalNorm;
};

/// Optimizer state. Moment buffers are created on the first step and mirror
/// the parameter list layout.
struct AdamState {
  AdamOptions options;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

struct AdamStepReport {
  double grad_norm = 0.0;   ///< global L2 norm before clipping
  double clip_scale = 1.0;  ///< factor applied under global-norm clipping
};

/// Clips the accumulated gradients, then applies one bias-corrected ADAM update
/// to every parameter. Throws NumericError (leaving parameters and state
/// untouched) when any gradient component is not finite.
AdamStepReport adam_step(ParameterList& params, AdamState& state);

/// Joint L2 norm over all parameter gradients.
double global_grad_norm(const ParameterList& params);

void zero_grads(ParameterList& params);

}  // namespace trackcast::num
