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

#include "trackcast/model/trajectory_model.hpp"

#include <algorithm>
#include <tuple>

#include "trackcast/errors.hpp"
#include "trackcast/num/ops.hpp"

namespace trackcast::model {

namespace {

num::Conv2dLayer grid_conv(const GridConv& c, num::Initializer& init) {
  return num::Conv2dLayer(c.in_channels, c.out_channels, c.kernel_h, c.kernel_w,
                          {1, 1, c.pad_h, c.pad_w}, init);
}

}  // namespace

TrajectoryModel::TrajectoryModel(ModelConfig config, std::uint64_t seed)
    : config_(std::move(config)), hash_(0) {
  config_.validate();
  hash_ = model::config_hash(config_);
  num::Initializer init(seed);
  neighbor_ = atcn::AtcnEncoder(config_.neighbor_atcn, init, config_.batch_norm);
  ego_ = atcn::AtcnEncoder(config_.ego_atcn, init, config_.batch_norm);
  grid_conv1_ = grid_conv(config_.grid_conv1, init);
  grid_conv2_ = grid_conv(config_.grid_conv2, init);
  ego_dense_ = num::DenseLayer(config_.ego_dense_in(), config_.ego_dense_out, init);
  init_h_ = num::DenseLayer(config_.context_width(), config_.decoder_hidden, init);
  init_c_ = num::DenseLayer(config_.context_width(), config_.decoder_hidden, init);
  lstm_ = num::LstmLayer(config_.output_dim, config_.decoder_hidden, init);
  head_ = num::DenseLayer(config_.decoder_hidden, config_.output_dim, init);
}

num::Tensor TrajectoryModel::encode_grid(const Batch& batch, num::Mode mode) {
  const std::size_t channels = config_.grid_conv1.in_channels;
  num::Tensor grid;
  if (batch.neighbor_history.defined()) {
    num::Tensor summary = neighbor_.encode_summary(batch.neighbor_history, mode);
    grid = num::scatter_grid(summary, batch.slots, batch.size, config_.grid_rows,
                             config_.grid_cols);
  } else {
    grid = num::Tensor::zeros({batch.size, channels, config_.grid_rows, config_.grid_cols});
  }
  num::Tensor v = num::swish(grid_conv1_.forward(grid));
  v = num::swish(grid_conv2_.forward(v));
  v = num::max_pool2d(v, config_.grid_pool);
  return num::reshape(v, {batch.size, config_.grid_features()});
}

num::Tensor TrajectoryModel::forward(const Batch& batch, num::Mode mode) {
  const std::size_t b = batch.size;
  if (!batch.ego_history.defined() || batch.ego_history.shape() !=
                                          num::Shape{b, 2, config_.history_steps}) {
    throw ConfigError("TrajectoryModel: ego history must be [B x 2 x " +
                      std::to_string(config_.history_steps) + "]");
  }
  num::Tensor grid_features = encode_grid(batch, mode);

  num::Tensor ego = ego_.forward(batch.ego_history, mode);
  if (config_.ego_dense_input == EgoDenseInput::kSequence) {
    ego = num::reshape(ego, {b, config_.ego_dense_in()});
  } else {
    ego = num::take(ego, 2, config_.history_steps - 1);
  }
  ego = num::swish(ego_dense_.forward(ego));

  num::Tensor context = num::concat({grid_features, ego}, 1);
  num::Tensor h = num::tanh(init_h_.forward(context));
  num::Tensor c = init_c_.forward(context);

  std::vector<num::Tensor> steps;
  steps.reserve(config_.horizon_steps);
  num::Tensor input = num::Tensor::zeros({b, config_.output_dim});
  for (std::size_t t = 0; t < config_.horizon_steps; ++t) {
    std::tie(h, c) = num::lstm_cell(input, h, c, lstm_.weights());
    num::Tensor y = head_.forward(h);
    steps.push_back(y);
    if (config_.autoregressive) input = y;
  }
  num::Tensor out = num::concat(std::span<const num::Tensor>(steps), 1);
  out = num::reshape(out, {b, config_.horizon_steps, config_.output_dim});
  return num::scale(out, config_.position_scale);
}

std::vector<ingest::Position> TrajectoryModel::predict(const ingest::TrajectorySample& sample) {
  Batch batch = collate(std::span<const ingest::TrajectorySample>(&sample, 1), config_, false);
  num::Tensor y = forward(batch, num::Mode::kEval);
  std::vector<ingest::Position> out(config_.horizon_steps);
  auto data = y.data();
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = {data[2 * t], data[2 * t + 1]};
  return out;
}

num::ParameterList TrajectoryModel::parameters() const {
  num::ParameterList list;
  neighbor_.collect("neighbor_atcn", list);
  ego_.collect("ego_atcn", list);
  grid_conv1_.collect("grid_conv1", list);
  grid_conv2_.collect("grid_conv2", list);
  ego_dense_.collect("ego_dense", list);
  init_h_.collect("decoder_init_h", list);
  init_c_.collect("decoder_init_c", list);
  lstm_.collect("decoder_lstm", list);
  head_.collect("decoder_head", list);
  return list;
}

std::vector<num::NamedStats> TrajectoryModel::running_stats() {
  std::vector<num::NamedStats> stats;
  neighbor_.collect_stats("neighbor_atcn", stats);
  ego_.collect_stats("ego_atcn", stats);
  return stats;
}

std::size_t TrajectoryModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.tensor.size();
  return n;
}

num::Checkpoint TrajectoryModel::to_checkpoint() {
  num::Checkpoint ckpt;
  ckpt.config_hash = hash_;
  for (const auto& p : parameters()) {
    ckpt.records.push_back({p.name, p.tensor.shape(), p.tensor.to_vector()});
  }
  for (const auto& s : running_stats()) {
    if (!s.stats->initialized()) continue;
    const std::size_t c = s.stats->mean.size();
    ckpt.records.push_back({s.name + ".mean", {c}, s.stats->mean});
    ckpt.records.push_back({s.name + ".var", {c}, s.stats->var});
  }
  return ckpt;
}

void TrajectoryModel::load(const num::Checkpoint& ckpt) {
  if (ckpt.config_hash != hash_) {
    throw ConfigMismatchError("checkpoint config hash " + hash_string(ckpt.config_hash) +
                              " does not match model config hash " + hash_string(hash_));
  }
  auto params = parameters();
  // Validate everything before touching any weight.
  for (const auto& p : params) {
    const num::TensorRecord* r = ckpt.find(p.name);
    if (!r) throw InputError("checkpoint is missing tensor '" + p.name + "'");
    if (r->shape != p.tensor.shape() || r->values.size() != p.tensor.size()) {
      throw InputError("checkpoint tensor '" + p.name + "' has shape " +
                       num::shape_string(r->shape) + ", expected " +
                       num::shape_string(p.tensor.shape()));
    }
  }
  for (auto& p : params) {
    const auto& values = ckpt.find(p.name)->values;
    auto dst = p.tensor.mutable_data();
    std::copy(values.begin(), values.end(), dst.begin());
  }
  for (const auto& s : running_stats()) {
    const num::TensorRecord* mean = ckpt.find(s.name + ".mean");
    const num::TensorRecord* var = ckpt.find(s.name + ".var");
    if (!mean || !var) {
      s.stats->mean.clear();
      s.stats->var.clear();
      continue;
    }
    if (mean->values.size() != var->values.size()) {
      throw InputError("checkpoint running statistics '" + s.name + "' are inconsistent");
    }
    s.stats->mean = mean->values;
    s.stats->var = var->values;
  }
}

}  // namespace trackcast::model
