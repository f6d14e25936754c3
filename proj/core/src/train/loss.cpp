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

#include "trackcast/train/loss.hpp"

#include <algorithm>
#include <cmath>

#include "trackcast/errors.hpp"
#include "trackcast/num/ops.hpp"

namespace trackcast::train {

const char* to_string(LossKind kind) { return kind == LossKind::kMse ? "mse" : "smooth-l1"; }

LossKind loss_kind_from_string(const std::string& text) {
  if (text == "mse") return LossKind::kMse;
  if (text == "smooth-l1" || text == "smooth_l1" || text == "huber") return LossKind::kSmoothL1;
  throw ConfigError("unknown loss '" + text + "' (mse|smooth-l1)");
}

num::Tensor trajectory_loss(const num::Tensor& prediction, const num::Tensor& target,
                            LossKind kind) {
  if (prediction.shape() != target.shape()) {
    throw ConfigError("loss: prediction " + num::shape_string(prediction.shape()) +
                      " vs target " + num::shape_string(target.shape()));
  }
  auto finite = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(prediction.data()) || !finite(target.data())) {
    throw NumericError("loss: non-finite prediction or target");
  }
  num::Tensor diff = num::sub(prediction, target);
  if (kind == LossKind::kMse) return num::mean(num::mul(diff, diff));
  return num::mean(num::smooth_l1(diff, 1.0));
}

}  // namespace trackcast::train
