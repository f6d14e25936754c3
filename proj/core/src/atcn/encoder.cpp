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

#include "trackcast/atcn/encoder.hpp"

#include <algorithm>

#include "trackcast/errors.hpp"
#include "trackcast/num/ops.hpp"

namespace trackcast::atcn {

namespace {

ConvUnit make_unit(std::size_t in, std::size_t out, std::size_t taps, std::size_t dilation,
                   std::size_t groups, num::Initializer& init, num::BatchNormOptions norm) {
  ConvUnit unit;
  unit.conv = num::Conv1dLayer(in, out, taps, dilation, groups, init);
  unit.norm = num::BatchNormLayer(out, norm);
  unit.pointwise = taps == 1 && groups == 1;
  return unit;
}

void set_identity(ConvUnit& unit, double epsilon) {
  num::Kernel1D& k = unit.conv.kernel();
  const std::size_t out = k.out_channels();
  const std::size_t per_group = k.weights.dim(1);
  const std::size_t taps = k.taps();
  auto w = k.weights.mutable_data();
  std::fill(w.begin(), w.end(), 0.0);
  for (std::size_t o = 0; o < out; ++o) {
    // Grouped units are depthwise: their single input channel is the output channel.
    const std::size_t c = k.groups == 1 ? o : 0;
    if (c < per_group) w[(o * per_group + c) * taps] = 1.0;
  }
  auto b = k.bias.mutable_data();
  std::fill(b.begin(), b.end(), 0.0);
  auto g = unit.norm.gamma().mutable_data();
  std::fill(g.begin(), g.end(), 1.0);
  auto beta = unit.norm.beta().mutable_data();
  std::fill(beta.begin(), beta.end(), 0.0);
  unit.norm.stats().mean.assign(out, 0.0);
  unit.norm.stats().var.assign(out, 1.0 - epsilon);
}

}  // namespace

AtcnEncoder::AtcnEncoder(AtcnConfig config, num::Initializer& init, num::BatchNormOptions norm)
    : config_(std::move(config)), norm_(norm) {
  config_.validate();
  for (std::size_t l = 0; l < config_.layers(); ++l) {
    const std::size_t in = config_.block_input_channels(l);
    const std::size_t out = config_.layer_output_channels[l];
    const std::size_t k = config_.kernel_sizes[l];
    const std::size_t d = config_.dilations[l];
    AtcnBlock block;
    if (l == 0 || !config_.separable) {
      block.units.push_back(make_unit(in, out, k, d, 1, init, norm_));
    } else {
      const std::size_t m = config_.separable_width(l);
      block.units.push_back(make_unit(in, m, 1, 1, 1, init, norm_));
      block.units.push_back(make_unit(m, m, k, d, m, init, norm_));
      block.units.push_back(make_unit(m, out, 1, 1, 1, init, norm_));
    }
    blocks_.push_back(std::move(block));
  }
}

num::Tensor AtcnEncoder::run_unit(ConvUnit& unit, const num::Tensor& x, num::Mode mode) const {
  num::Tensor y = unit.pointwise ? num::pointwise_conv1d(x, unit.conv.kernel())
                                 : num::dilated_conv1d(x, unit.conv.kernel(), config_.pad_mode);
  y = unit.norm.forward(y, mode);
  return config_.activation == Activation::kSwish ? num::swish(y) : y;
}

num::Tensor AtcnEncoder::forward(const num::Tensor& x, num::Mode mode) {
  if (blocks_.empty()) throw UsageError("AtcnEncoder: not constructed");
  if (x.rank() < 2 || x.rank() > 3) {
    throw ConfigError("AtcnEncoder: expected [C x T] or [B x C x T], got " +
                      num::shape_string(x.shape()));
  }
  if (x.dim(x.rank() - 2) != config_.input_channels) {
    throw ConfigError("AtcnEncoder: expected " + std::to_string(config_.input_channels) +
                      " input channels, got " + num::shape_string(x.shape()));
  }
  // Batch norm needs a batch axis; lift single sequences to B = 1.
  const bool single = x.rank() == 2;
  num::Tensor h = single ? num::reshape(x, {1, x.dim(0), x.dim(1)}) : x;
  for (AtcnBlock& block : blocks_) {
    for (ConvUnit& unit : block.units) h = run_unit(unit, h, mode);
  }
  return single ? num::reshape(h, {h.dim(1), h.dim(2)}) : h;
}

num::Tensor AtcnEncoder::encode_summary(const num::Tensor& x, num::Mode mode) {
  num::Tensor h = forward(x, mode);
  const std::size_t time_axis = h.rank() - 1;
  return num::take(h, time_axis, h.dim(time_axis) - 1);
}

void AtcnEncoder::make_identity() {
  for (std::size_t l = 0; l < config_.layers(); ++l) {
    const std::size_t in = config_.block_input_channels(l);
    const bool narrow_stage = l > 0 && config_.separable && config_.separable_width(l) < in;
    if (config_.layer_output_channels[l] < in || narrow_stage) {
      throw ConfigError("make_identity: widths must not shrink (use separable width divisor 1)");
    }
  }
  for (AtcnBlock& block : blocks_) {
    for (ConvUnit& unit : block.units) set_identity(unit, norm_.epsilon);
  }
}

void AtcnEncoder::collect(const std::string& prefix, num::ParameterList& out) const {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t u = 0; u < blocks_[b].units.size(); ++u) {
      const std::string name = prefix + ".block" + std::to_string(b) + ".unit" + std::to_string(u);
      blocks_[b].units[u].conv.collect(name + ".conv", out);
      blocks_[b].units[u].norm.collect(name + ".norm", out);
    }
  }
}

void AtcnEncoder::collect_stats(const std::string& prefix, std::vector<num::NamedStats>& out) {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t u = 0; u < blocks_[b].units.size(); ++u) {
      blocks_[b].units[u].norm.collect_stats(
          prefix + ".block" + std::to_string(b) + ".unit" + std::to_string(u) + ".norm", out);
    }
  }
}

}  // namespace trackcast::atcn
