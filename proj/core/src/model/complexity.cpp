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

#include "trackcast/model/complexity.hpp"

namespace trackcast::model {

std::uint64_t conv1d_params(std::size_t in, std::size_t out, std::size_t taps, std::size_t groups) {
  return static_cast<std::uint64_t>(out) * (in / groups) * taps + out;
}

std::uint64_t conv1d_macs(std::size_t in, std::size_t out, std::size_t taps, std::size_t groups,
                          std::size_t steps) {
  return static_cast<std::uint64_t>(steps) * taps * (in / groups) * out;
}

std::uint64_t conv2d_params(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw) {
  return static_cast<std::uint64_t>(out) * in * kh * kw + out;
}

std::uint64_t conv2d_macs(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw,
                          std::size_t out_h, std::size_t out_w) {
  return static_cast<std::uint64_t>(out_h) * out_w * kh * kw * in * out;
}

std::uint64_t dense_params(std::size_t in, std::size_t out) {
  return static_cast<std::uint64_t>(in) * out + out;
}

std::uint64_t dense_macs(std::size_t in, std::size_t out) {
  return static_cast<std::uint64_t>(in) * out;
}

std::uint64_t lstm_params(std::size_t in, std::size_t hidden) {
  return 4 * (static_cast<std::uint64_t>(in + hidden) * hidden + hidden);
}

std::uint64_t lstm_step_macs(std::size_t in, std::size_t hidden) {
  return 4 * static_cast<std::uint64_t>(in + hidden) * hidden;
}

std::uint64_t batch_norm_params(std::size_t channels) { return 2 * channels; }

std::uint64_t batch_norm_macs(std::size_t channels, std::size_t elements_per_channel) {
  return 2 * static_cast<std::uint64_t>(channels) * elements_per_channel;
}

std::vector<LayerCost> atcn_costs(const atcn::AtcnConfig& config, std::size_t steps,
                                  const std::string& prefix) {
  std::vector<LayerCost> out;
  auto unit = [&](const std::string& name, std::size_t in, std::size_t width, std::size_t taps,
                  std::size_t groups) {
    out.push_back({name + ".conv", conv1d_params(in, width, taps, groups), 0,
                   conv1d_macs(in, width, taps, groups, steps)});
    out.push_back(
        {name + ".norm", batch_norm_params(width), 2 * width, batch_norm_macs(width, steps)});
  };
  for (std::size_t l = 0; l < config.layers(); ++l) {
    const std::string block = prefix + ".block" + std::to_string(l);
    const std::size_t in = config.block_input_channels(l);
    const std::size_t width = config.layer_output_channels[l];
    const std::size_t k = config.kernel_sizes[l];
    if (l == 0 || !config.separable) {
      unit(block + ".unit0", in, width, k, 1);
    } else {
      const std::size_t m = config.separable_width(l);
      unit(block + ".unit0", in, m, 1, 1);
      unit(block + ".unit1", m, m, k, m);
      unit(block + ".unit2", m, width, 1, 1);
    }
  }
  return out;
}

ComplexityReport count_complexity(const ModelConfig& config, MacShape shape) {
  config.validate();
  ComplexityReport report;
  report.shape = shape;
  const std::size_t t = config.history_steps;

  for (LayerCost c : atcn_costs(config.neighbor_atcn, t, "neighbor_atcn")) {
    c.macs *= shape.neighbors;
    report.layers.push_back(c);
  }
  for (const LayerCost& c : atcn_costs(config.ego_atcn, t, "ego_atcn")) report.layers.push_back(c);

  const GridConv& g1 = config.grid_conv1;
  const GridConv& g2 = config.grid_conv2;
  report.layers.push_back({"grid_conv1", conv2d_params(g1.in_channels, g1.out_channels,
                                                       g1.kernel_h, g1.kernel_w),
                           0,
                           conv2d_macs(g1.in_channels, g1.out_channels, g1.kernel_h, g1.kernel_w,
                                       config.conv1_rows(), config.conv1_cols())});
  report.layers.push_back({"grid_conv2", conv2d_params(g2.in_channels, g2.out_channels,
                                                       g2.kernel_h, g2.kernel_w),
                           0,
                           conv2d_macs(g2.in_channels, g2.out_channels, g2.kernel_h, g2.kernel_w,
                                       config.conv2_rows(), config.conv2_cols())});

  const std::size_t ctx = config.context_width();
  const std::size_t hidden = config.decoder_hidden;
  const std::size_t horizon = config.horizon_steps;
  report.layers.push_back({"ego_dense", dense_params(config.ego_dense_in(), config.ego_dense_out),
                           0, dense_macs(config.ego_dense_in(), config.ego_dense_out)});
  report.layers.push_back(
      {"decoder_init_h", dense_params(ctx, hidden), 0, dense_macs(ctx, hidden)});
  report.layers.push_back(
      {"decoder_init_c", dense_params(ctx, hidden), 0, dense_macs(ctx, hidden)});
  report.layers.push_back({"decoder_lstm", lstm_params(config.output_dim, hidden), 0,
                           horizon * lstm_step_macs(config.output_dim, hidden)});
  report.layers.push_back({"decoder_head", dense_params(hidden, config.output_dim), 0,
                           horizon * dense_macs(hidden, config.output_dim)});

  for (const LayerCost& c : report.layers) {
    report.total_params += c.params;
    report.total_running_stats += c.running_stats;
    report.total_macs += c.macs;
  }
  return report;
}

ComplexityReport count_params(const ModelConfig& config) { return count_complexity(config); }

ComplexityReport count_macs(const ModelConfig& config, MacShape shape) {
  return count_complexity(config, shape);
}

std::vector<BlockSaving> separable_savings(const atcn::AtcnConfig& config, std::size_t steps) {
  config.validate();
  std::vector<BlockSaving> out;
  for (std::size_t l = 1; l < config.layers(); ++l) {
    const std::size_t in = config.block_input_channels(l);
    const std::size_t width = config.layer_output_channels[l];
    const std::size_t k = config.kernel_sizes[l];
    const std::size_t m = config.separable_width(l);
    BlockSaving s;
    s.block = l;
    s.standard_macs = conv1d_macs(in, width, k, 1, steps);
    s.separable_macs = conv1d_macs(in, m, 1, 1, steps) + conv1d_macs(m, m, k, m, steps) +
                       conv1d_macs(m, width, 1, 1, steps);
    out.push_back(s);
  }
  return out;
}

double percent_deviation(std::uint64_t value, std::uint64_t reference) {
  return (static_cast<double>(value) - static_cast<double>(reference)) /
         static_cast<double>(reference) * 100.0;
}

}  // namespace trackcast::model
