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
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "trackcast/num/batch_norm.hpp"
#include "trackcast/num/conv.hpp"
#include "trackcast/num/tensor.hpp"

namespace trackcast::num {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

/// Ordered set of learnable tensors. Order is stable and defines checkpoint
/// and optimizer-state layout.
using ParameterList = std::vector<NamedTensor>;

/// Non-learnable per-channel statistics exposed for checkpointing.
struct NamedStats {
  std::string name;
  BatchNormStats* stats;
};

/// Deterministic initializer: draws from a seeded 64-bit Mersenne twister and
/// maps to doubles with a fixed 53-bit construction, so the stream does not
/// depend on the standard library's distribution implementations.
class Initializer {
 public:
  explicit Initializer(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  /// Values uniform in +-1/sqrt(fan_in).
  std::vector<double> fan_in_uniform(std::size_t count, std::size_t fan_in);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

class Conv1dLayer {
 public:
  Conv1dLayer() = default;
  Conv1dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t taps,
              std::size_t dilation, std::size_t groups, Initializer& init);

  Kernel1D& kernel() { return kernel_; }
  const Kernel1D& kernel() const { return kernel_; }
  void collect(const std::string& prefix, ParameterList& out) const;

 private:
  Kernel1D kernel_;
};

class Conv2dLayer {
 public:
  Conv2dLayer() = default;
  Conv2dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t kernel_h,
              std::size_t kernel_w, Conv2dGeometry geometry, Initializer& init);

  Tensor forward(const Tensor& x) const;
  Tensor& weights() { return weights_; }
  Tensor& bias() { return bias_; }
  void collect(const std::string& prefix, ParameterList& out) const;

 private:
  Tensor weights_;
  Tensor bias_;
  Conv2dGeometry geometry_;
};

class DenseLayer {
 public:
  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out, Initializer& init);

  Tensor forward(const Tensor& x) const;
  Tensor& weights() { return weights_; }
  Tensor& bias() { return bias_; }
  std::size_t in() const { return weights_.dim(1); }
  std::size_t out() const { return weights_.dim(0); }
  void collect(const std::string& prefix, ParameterList& out) const;

 private:
  Tensor weights_;
  Tensor bias_;
};

class BatchNormLayer {
 public:
  BatchNormLayer() = default;
  BatchNormLayer(std::size_t channels, BatchNormOptions options);

  /// Train mode updates the running statistics; the caller must hold the
  /// layer exclusively.
  Tensor forward(const Tensor& x, Mode mode);
  Tensor& gamma() { return gamma_; }
  Tensor& beta() { return beta_; }
  BatchNormStats& stats() { return stats_; }
  const BatchNormStats& stats() const { return stats_; }
  void collect(const std::string& prefix, ParameterList& out) const;
  void collect_stats(const std::string& prefix, std::vector<NamedStats>& out);

 private:
  Tensor gamma_;
  Tensor beta_;
  BatchNormStats stats_;
  BatchNormOptions options_;
};

/// Standard gated LSTM cell with gate blocks ordered (input, forget, cell,
/// output) and one bias per gate unit.
struct LstmWeights {
  Tensor input;      ///< [4H x in]
  Tensor recurrent;  ///< [4H x H]
  Tensor bias;       ///< [4H]

  std::size_t hidden() const { return recurrent.dim(1); }
};

/// One recurrence step. x_t is [in] or [B x in]; h_prev and c_prev are [H] or [B x H].
std::pair<Tensor, Tensor> lstm_cell(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                                    const LstmWeights& weights);

class LstmLayer {
 public:
  LstmLayer() = default;
  /// Uniform +-1/sqrt(fan_in) per block (fan_in = in for input weights, H for
  /// recurrent weights); forget-gate bias set to +1.
  LstmLayer(std::size_t in, std::size_t hidden, Initializer& init);

  LstmWeights& weights() { return weights_; }
  const LstmWeights& weights() const { return weights_; }
  void collect(const std::string& prefix, ParameterList& out) const;

 private:
  LstmWeights weights_;
};

}  // namespace trackcast::num
