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

#include "trackcast/num/layers.hpp"

#include <cmath>

#include "trackcast/errors.hpp"
#include "trackcast/num/ops.hpp"

namespace trackcast::num {

double Initializer::uniform(double lo, double hi) {
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

std::vector<double> Initializer::fan_in_uniform(std::size_t count, std::size_t fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::vector<double> values(count);
  for (double& v : values) v = uniform(-bound, bound);
  return values;
}

Conv1dLayer::Conv1dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t taps,
                         std::size_t dilation, std::size_t groups, Initializer& init) {
  if (taps < 1 || dilation < 1 || groups < 1 || in_channels % groups || out_channels % groups) {
    throw ConfigError("conv1d layer: invalid taps/dilation/groups");
  }
  const std::size_t per_group = in_channels / groups;
  const std::size_t fan_in = per_group * taps;
  kernel_.weights = Tensor::parameter({out_channels, per_group, taps},
                                      init.fan_in_uniform(out_channels * per_group * taps, fan_in));
  kernel_.bias = Tensor::parameter({out_channels}, init.fan_in_uniform(out_channels, fan_in));
  kernel_.dilation = dilation;
  kernel_.groups = groups;
}

void Conv1dLayer::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".weight", kernel_.weights});
  out.push_back({prefix + ".bias", kernel_.bias});
}

Conv2dLayer::Conv2dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t kernel_h,
                         std::size_t kernel_w, Conv2dGeometry geometry, Initializer& init)
    : geometry_(geometry) {
  const std::size_t fan_in = in_channels * kernel_h * kernel_w;
  weights_ = Tensor::parameter({out_channels, in_channels, kernel_h, kernel_w},
                               init.fan_in_uniform(out_channels * fan_in, fan_in));
  bias_ = Tensor::parameter({out_channels}, init.fan_in_uniform(out_channels, fan_in));
}

Tensor Conv2dLayer::forward(const Tensor& x) const { return conv2d(x, weights_, bias_, geometry_); }

void Conv2dLayer::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".weight", weights_});
  out.push_back({prefix + ".bias", bias_});
}

DenseLayer::DenseLayer(std::size_t in, std::size_t out, Initializer& init) {
  weights_ = Tensor::parameter({out, in}, init.fan_in_uniform(out * in, in));
  bias_ = Tensor::parameter({out}, init.fan_in_uniform(out, in));
}

Tensor DenseLayer::forward(const Tensor& x) const { return dense(x, weights_, bias_); }

void DenseLayer::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".weight", weights_});
  out.push_back({prefix + ".bias", bias_});
}

BatchNormLayer::BatchNormLayer(std::size_t channels, BatchNormOptions options)
    : gamma_(Tensor::parameter({channels}, std::vector<double>(channels, 1.0))),
      beta_(Tensor::parameter({channels}, std::vector<double>(channels, 0.0))),
      options_(options) {}

Tensor BatchNormLayer::forward(const Tensor& x, Mode mode) {
  return batch_norm(x, gamma_, beta_, stats_, mode, options_);
}

void BatchNormLayer::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".gamma", gamma_});
  out.push_back({prefix + ".beta", beta_});
}

void BatchNormLayer::collect_stats(const std::string& prefix, std::vector<NamedStats>& out) {
  out.push_back({prefix, &stats_});
}

std::pair<Tensor, Tensor> lstm_cell(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                                    const LstmWeights& w) {
  const std::size_t hidden = w.hidden();
  if (w.input.rank() != 2 || w.input.dim(0) != 4 * hidden || w.recurrent.dim(0) != 4 * hidden ||
      w.bias.shape() != Shape{4 * hidden}) {
    throw ConfigError("lstm_cell: inconsistent weight blocks");
  }
  if (h_prev.shape() != c_prev.shape() || h_prev.shape().back() != hidden ||
      x.rank() != h_prev.rank() || (x.rank() == 2 && x.dim(0) != h_prev.dim(0))) {
    throw ConfigError("lstm_cell: state shapes " + shape_string(h_prev.shape()) + " / " +
                      shape_string(c_prev.shape()) + " do not match hidden size " +
                      std::to_string(hidden));
  }
  Tensor gates = add(dense(x, w.input, w.bias), dense(h_prev, w.recurrent, Tensor{}));
  const std::size_t axis = gates.rank() - 1;
  Tensor i = sigmoid(slice(gates, axis, 0, hidden));
  Tensor f = sigmoid(slice(gates, axis, hidden, 2 * hidden));
  Tensor g = tanh(slice(gates, axis, 2 * hidden, 3 * hidden));
  Tensor o = sigmoid(slice(gates, axis, 3 * hidden, 4 * hidden));
  Tensor c = add(mul(f, c_prev), mul(i, g));
  Tensor h = mul(o, tanh(c));
  return {h, c};
}

LstmLayer::LstmLayer(std::size_t in, std::size_t hidden, Initializer& init) {
  weights_.input = Tensor::parameter({4 * hidden, in}, init.fan_in_uniform(4 * hidden * in, in));
  weights_.recurrent =
      Tensor::parameter({4 * hidden, hidden}, init.fan_in_uniform(4 * hidden * hidden, hidden));
  std::vector<double> bias = init.fan_in_uniform(4 * hidden, hidden);
  for (std::size_t k = hidden; k < 2 * hidden; ++k) bias[k] = 1.0;
  weights_.bias = Tensor::parameter({4 * hidden}, std::move(bias));
}

void LstmLayer::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".weight_input", weights_.input});
  out.push_back({prefix + ".weight_recurrent", weights_.recurrent});
  out.push_back({prefix + ".bias", weights_.bias});
}

}  // namespace trackcast::num
