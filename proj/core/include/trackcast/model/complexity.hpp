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

#include "trackcast/atcn/config.hpp"
#include "trackcast/model/config.hpp"

namespace trackcast::model {

/// Reference totals the default configuration is calibrated against.
inline constexpr std::uint64_t kReferenceMacs = 1'667'425;
inline constexpr std::uint64_t kReferenceParams = 171'703;

/// Input shape MACs are counted for. History and horizon lengths come from the
/// model config; every neighbour runs the neighbour encoder once.
struct MacShape {
  std::size_t neighbors = 1;
};

struct LayerCost {
  std::string name;
  std::uint64_t params = 0;         ///< learnable values
  std::uint64_t running_stats = 0;  ///< batch-norm running mean + variance values
  std::uint64_t macs = 0;
};

struct ComplexityReport {
  std::vector<LayerCost> layers;
  std::uint64_t total_params = 0;
  std::uint64_t total_running_stats = 0;
  std::uint64_t total_macs = 0;
  MacShape shape;

  std::uint64_t params_with_running_stats() const { return total_params + total_running_stats; }
};

// Unit formulas. Convolutions count one MAC per weight application per output
// element; bias adds and nonlinearities are free. Batch norm costs 2 per element.
std::uint64_t conv1d_params(std::size_t in, std::size_t out, std::size_t taps, std::size_t groups);
std::uint64_t conv1d_macs(std::size_t in, std::size_t out, std::size_t taps, std::size_t groups,
                          std::size_t steps);
std::uint64_t conv2d_params(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw);
std::uint64_t conv2d_macs(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw,
                          std::size_t out_h, std::size_t out_w);
std::uint64_t dense_params(std::size_t in, std::size_t out);
std::uint64_t dense_macs(std::size_t in, std::size_t out);
std::uint64_t lstm_params(std::size_t in, std::size_t hidden);
std::uint64_t lstm_step_macs(std::size_t in, std::size_t hidden);
std::uint64_t batch_norm_params(std::size_t channels);
std::uint64_t batch_norm_macs(std::size_t channels, std::size_t elements_per_channel);

/// Per-layer costs of one ATCN encoder applied to one sequence of `steps`.
std::vector<LayerCost> atcn_costs(const atcn::AtcnConfig& config, std::size_t steps,
                                  const std::string& prefix);

/// Full per-layer breakdown. count_params and count_macs return the same
/// report; count_params uses the default MAC shape.
ComplexityReport count_complexity(const ModelConfig& config, MacShape shape = {});
ComplexityReport count_params(const ModelConfig& config);
ComplexityReport count_macs(const ModelConfig& config, MacShape shape);

/// Convolution MACs of a separable block against a standard convolution with
/// the same input width, output width, kernel and dilation.
struct BlockSaving {
  std::size_t block = 0;
  std::uint64_t separable_macs = 0;
  std::uint64_t standard_macs = 0;
  double ratio() const {
    return separable_macs ? static_cast<double>(standard_macs) / separable_macs : 0.0;
  }
};

/// One entry per block after the first.
std::vector<BlockSaving> separable_savings(const atcn::AtcnConfig& config, std::size_t steps);

/// Signed percentage deviation (value - reference) / reference * 100.
double percent_deviation(std::uint64_t value, std::uint64_t reference);

}  // namespace trackcast::model
