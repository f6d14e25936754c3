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

#include "trackcast/num/batch_norm.hpp"

#include <cmath>
#include <string>

#include "trackcast/errors.hpp"

namespace trackcast::num {

Tensor batch_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, BatchNormStats& stats,
                  Mode mode, BatchNormOptions options) {
  if (x.rank() < 2) throw ConfigError("batch_norm: input must have a batch and a channel axis");
  const std::size_t batch = x.dim(0);
  const std::size_t channels = x.dim(1);
  const std::size_t inner = x.size() / (batch * channels);
  if (gamma.shape() != Shape{channels} || beta.shape() != Shape{channels}) {
    throw ConfigError("batch_norm: gamma/beta must have " + std::to_string(channels) + " entries");
  }
  const double count = static_cast<double>(batch * inner);
  auto xv = x.data();
  auto at = [=](std::size_t b, std::size_t c, std::size_t i) { return (b * channels + c) * inner + i; };

  std::vector<double> centre(channels);
  std::vector<double> inv_std(channels);
  if (mode == Mode::kTrain) {
    if (!stats.initialized()) {
      stats.mean.assign(channels, 0.0);
      stats.var.assign(channels, 1.0);
    }
    for (std::size_t c = 0; c < channels; ++c) {
      double m = 0.0;
      for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t i = 0; i < inner; ++i) m += xv[at(b, c, i)];
      m /= count;
      double ss = 0.0;
      for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t i = 0; i < inner; ++i) {
          double dlt = xv[at(b, c, i)] - m;
          ss += dlt * dlt;
        }
      double var = ss / count;
      double unbiased = count > 1 ? ss / (count - 1) : var;
      centre[c] = m;
      inv_std[c] = 1.0 / std::sqrt(var + options.epsilon);
      stats.mean[c] = (1.0 - options.momentum) * stats.mean[c] + options.momentum * m;
      stats.var[c] = (1.0 - options.momentum) * stats.var[c] + options.momentum * unbiased;
    }
  } else {
    if (!stats.initialized()) throw ConfigError("batch_norm: eval mode before any running statistics exist");
    if (stats.mean.size() != channels) throw ConfigError("batch_norm: running statistics size mismatch");
    for (std::size_t c = 0; c < channels; ++c) {
      centre[c] = stats.mean[c];
      inv_std[c] = 1.0 / std::sqrt(stats.var[c] + options.epsilon);
    }
  }

  auto gv = gamma.data();
  auto bv = beta.data();
  std::vector<double> xhat(x.size());
  std::vector<double> out(x.size());
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t c = 0; c < channels; ++c)
      for (std::size_t i = 0; i < inner; ++i) {
        std::size_t k = at(b, c, i);
        xhat[k] = (xv[k] - centre[c]) * inv_std[c];
        out[k] = gv[c] * xhat[k] + bv[c];
      }

  Tensor xw = x;
  Tensor gw = gamma;
  Tensor bw = beta;
  const bool train = mode == Mode::kTrain;
  return make_result(
      x.shape(), std::move(out), {x, gamma, beta},
      [=, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& self) mutable {
        const auto& gy = self.grad;
        auto gv = gw.data();
        if (gw.requires_grad() || bw.requires_grad()) {
          std::span<double> gg = gw.requires_grad() ? gw.mutable_grad() : std::span<double>{};
          std::span<double> gb = bw.requires_grad() ? bw.mutable_grad() : std::span<double>{};
          for (std::size_t c = 0; c < channels; ++c) {
            double sg = 0.0, sb = 0.0;
            for (std::size_t b = 0; b < batch; ++b)
              for (std::size_t i = 0; i < inner; ++i) {
                std::size_t k = at(b, c, i);
                sg += gy[k] * xhat[k];
                sb += gy[k];
              }
            if (!gg.empty()) gg[c] += sg;
            if (!gb.empty()) gb[c] += sb;
          }
        }
        if (!xw.requires_grad()) return;
        auto gx = xw.mutable_grad();
        for (std::size_t c = 0; c < channels; ++c) {
          if (!train) {
            for (std::size_t b = 0; b < batch; ++b)
              for (std::size_t i = 0; i < inner; ++i) {
                std::size_t k = at(b, c, i);
                gx[k] += gy[k] * gv[c] * inv_std[c];
              }
            continue;
          }
          double sum_d = 0.0, sum_dx = 0.0;
          for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t i = 0; i < inner; ++i) {
              std::size_t k = at(b, c, i);
              double d = gy[k] * gv[c];
              sum_d += d;
              sum_dx += d * xhat[k];
            }
          for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t i = 0; i < inner; ++i) {
              std::size_t k = at(b, c, i);
              double d = gy[k] * gv[c];
              gx[k] += inv_std[c] * (d - sum_d / count - xhat[k] * sum_dx / count);
            }
        }
      });
}

}  // namespace trackcast::num
