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

#include "trackcast/model/config.hpp"

#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "trackcast/errors.hpp"
#include "trackcast/ingest/archive.hpp"

namespace trackcast::model {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

json grid_conv_json(const GridConv& c) {
  return {{"inChannels", c.in_channels},
          {"outChannels", c.out_channels},
          {"kernel", {c.kernel_h, c.kernel_w}},
          {"padding", {c.pad_h, c.pad_w}}};
}

void read_pair(const json& j, const char* key, std::size_t& a, std::size_t& b) {
  if (!j.contains(key)) return;
  std::vector<std::size_t> v;
  read(j, key, v);
  if (v.size() != 2) throw ConfigError(std::string("config key '") + key + "' needs two values");
  a = v[0];
  b = v[1];
}

GridConv grid_conv_from(const json& j, GridConv c) {
  reject_unknown(j, {"inChannels", "outChannels", "kernel", "padding"}, "grid conv");
  read(j, "inChannels", c.in_channels);
  read(j, "outChannels", c.out_channels);
  read_pair(j, "kernel", c.kernel_h, c.kernel_w);
  read_pair(j, "padding", c.pad_h, c.pad_w);
  return c;
}

std::size_t conv_extent(std::size_t in, std::size_t kernel, std::size_t pad) {
  return in + 2 * pad >= kernel ? in + 2 * pad - kernel + 1 : 0;
}

}  // namespace

const char* to_string(EgoDenseInput input) {
  return input == EgoDenseInput::kSequence ? "sequence" : "summary";
}

EgoDenseInput ego_dense_input_from_string(const std::string& text) {
  if (text == "sequence") return EgoDenseInput::kSequence;
  if (text == "summary") return EgoDenseInput::kSummary;
  throw ConfigError("unknown ego dense input '" + text + "' (sequence|summary)");
}

std::size_t ModelConfig::conv1_rows() const {
  return conv_extent(grid_rows, grid_conv1.kernel_h, grid_conv1.pad_h);
}
std::size_t ModelConfig::conv1_cols() const {
  return conv_extent(grid_cols, grid_conv1.kernel_w, grid_conv1.pad_w);
}
std::size_t ModelConfig::conv2_rows() const {
  return conv_extent(conv1_rows(), grid_conv2.kernel_h, grid_conv2.pad_h);
}
std::size_t ModelConfig::conv2_cols() const {
  return conv_extent(conv1_cols(), grid_conv2.kernel_w, grid_conv2.pad_w);
}
std::size_t ModelConfig::pooled_rows() const {
  return num::pooled_extent(conv2_rows(), grid_pool.window_h, grid_pool.stride_h, grid_pool.pad_h);
}
std::size_t ModelConfig::pooled_cols() const {
  return num::pooled_extent(conv2_cols(), grid_pool.window_w, grid_pool.stride_w, grid_pool.pad_w);
}
std::size_t ModelConfig::grid_features() const {
  return grid_conv2.out_channels * pooled_rows() * pooled_cols();
}
std::size_t ModelConfig::ego_dense_in() const {
  const std::size_t c = ego_atcn.output_channels();
  return ego_dense_input == EgoDenseInput::kSequence ? c * history_steps : c;
}
std::size_t ModelConfig::context_width() const { return grid_features() + ego_dense_out; }

void ModelConfig::validate() const {
  neighbor_atcn.validate();
  ego_atcn.validate();
  if (neighbor_atcn.input_channels != 2 || ego_atcn.input_channels != 2) {
    throw ConfigError("encoders read (x, y) histories: inputChannels must be 2");
  }
  if (neighbor_atcn.output_channels() != grid_conv1.in_channels) {
    throw ConfigError("neighbour encoder width " + std::to_string(neighbor_atcn.output_channels()) +
                      " != grid conv input width " + std::to_string(grid_conv1.in_channels));
  }
  if (grid_conv1.out_channels != grid_conv2.in_channels) {
    throw ConfigError("grid conv widths do not chain");
  }
  if (history_steps == 0 || horizon_steps == 0 || grid_rows == 0 || grid_cols == 0 ||
      decoder_hidden == 0 || ego_dense_out == 0 || output_dim == 0) {
    throw ConfigError("model sizes must be positive");
  }
  if (grid_conv1.kernel_h == 0 || grid_conv1.kernel_w == 0 || grid_conv2.kernel_h == 0 ||
      grid_conv2.kernel_w == 0 || grid_pool.window_h == 0 || grid_pool.window_w == 0 ||
      grid_pool.stride_h == 0 || grid_pool.stride_w == 0) {
    throw ConfigError("grid kernels, pooling windows and strides must be positive");
  }
  if (grid_features() == 0) throw ConfigError("grid pooling stages collapse the grid to nothing");
  if (!(position_scale > 0.0)) throw ConfigError("positionScale must be > 0");
  if (!(batch_norm.epsilon > 0.0) || batch_norm.momentum < 0.0 || batch_norm.momentum > 1.0) {
    throw ConfigError("batch norm epsilon must be > 0 and momentum in [0, 1]");
  }
  if (output_dim != 2) throw ConfigError("predictions are (x, y) pairs: outputDim must be 2");
}

bool operator==(const ModelConfig& a, const ModelConfig& b) { return to_json(a) == to_json(b); }

json to_json(const atcn::AtcnConfig& c) {
  return {{"layerOutputChannels", c.layer_output_channels},
          {"dilations", c.dilations},
          {"kernelSizes", c.kernel_sizes},
          {"inputChannels", c.input_channels},
          {"padMode", num::to_string(c.pad_mode)},
          {"separable", c.separable},
          {"separableWidthDivisor", c.separable_width_divisor},
          {"activation", c.activation == atcn::Activation::kSwish ? "swish" : "identity"}};
}

atcn::AtcnConfig atcn_config_from_json(const json& j) {
  reject_unknown(j,
                 {"layerOutputChannels", "dilations", "kernelSizes", "inputChannels", "padMode",
                  "separable", "separableWidthDivisor", "activation"},
                 "ATCN config");
  atcn::AtcnConfig c;
  c.dilations.clear();
  c.kernel_sizes.clear();
  read(j, "layerOutputChannels", c.layer_output_channels);
  read(j, "dilations", c.dilations);
  read(j, "kernelSizes", c.kernel_sizes);
  // Omitted dilations / kernel sizes default to 1 and 2 per layer.
  if (!j.contains("dilations")) c.dilations.assign(c.layer_output_channels.size(), 1);
  if (!j.contains("kernelSizes")) c.kernel_sizes.assign(c.layer_output_channels.size(), 2);
  read(j, "inputChannels", c.input_channels);
  read(j, "separable", c.separable);
  read(j, "separableWidthDivisor", c.separable_width_divisor);
  std::string pad = num::to_string(c.pad_mode);
  read(j, "padMode", pad);
  try {
    c.pad_mode = num::pad_mode_from_string(pad);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  std::string act = "swish";
  read(j, "activation", act);
  if (act == "swish") {
    c.activation = atcn::Activation::kSwish;
  } else if (act == "identity") {
    c.activation = atcn::Activation::kIdentity;
  } else {
    throw ConfigError("unknown activation '" + act + "' (swish|identity)");
  }
  c.validate();
  return c;
}

json to_json(const ModelConfig& c) {
  return {{"neighborAtcn", to_json(c.neighbor_atcn)},
          {"egoAtcn", to_json(c.ego_atcn)},
          {"historySteps", c.history_steps},
          {"horizonSteps", c.horizon_steps},
          {"gridRows", c.grid_rows},
          {"gridCols", c.grid_cols},
          {"gridConv1", grid_conv_json(c.grid_conv1)},
          {"gridConv2", grid_conv_json(c.grid_conv2)},
          {"gridPool",
           {{"window", {c.grid_pool.window_h, c.grid_pool.window_w}},
            {"stride", {c.grid_pool.stride_h, c.grid_pool.stride_w}},
            {"padding", {c.grid_pool.pad_h, c.grid_pool.pad_w}}}},
          {"egoDenseInput", to_string(c.ego_dense_input)},
          {"egoDenseOut", c.ego_dense_out},
          {"decoderHidden", c.decoder_hidden},
          {"outputDim", c.output_dim},
          {"autoregressive", c.autoregressive},
          {"positionScale", c.position_scale},
          {"batchNormMomentum", c.batch_norm.momentum},
          {"batchNormEpsilon", c.batch_norm.epsilon}};
}

ModelConfig model_config_from_json(const json& j) {
  reject_unknown(j,
                 {"neighborAtcn", "egoAtcn", "historySteps", "horizonSteps", "gridRows",
                  "gridCols", "gridConv1", "gridConv2", "gridPool", "egoDenseInput",
                  "egoDenseOut", "decoderHidden", "outputDim", "autoregressive", "positionScale",
                  "batchNormMomentum", "batchNormEpsilon"},
                 "model config");
  ModelConfig c;
  if (j.contains("neighborAtcn")) c.neighbor_atcn = atcn_config_from_json(j.at("neighborAtcn"));
  if (j.contains("egoAtcn")) c.ego_atcn = atcn_config_from_json(j.at("egoAtcn"));
  read(j, "historySteps", c.history_steps);
  read(j, "horizonSteps", c.horizon_steps);
  read(j, "gridRows", c.grid_rows);
  read(j, "gridCols", c.grid_cols);
  if (j.contains("gridConv1")) c.grid_conv1 = grid_conv_from(j.at("gridConv1"), c.grid_conv1);
  if (j.contains("gridConv2")) c.grid_conv2 = grid_conv_from(j.at("gridConv2"), c.grid_conv2);
  if (j.contains("gridPool")) {
    const json& p = j.at("gridPool");
    reject_unknown(p, {"window", "stride", "padding"}, "grid pool");
    read_pair(p, "window", c.grid_pool.window_h, c.grid_pool.window_w);
    read_pair(p, "stride", c.grid_pool.stride_h, c.grid_pool.stride_w);
    read_pair(p, "padding", c.grid_pool.pad_h, c.grid_pool.pad_w);
  }
  std::string ego_input = to_string(c.ego_dense_input);
  read(j, "egoDenseInput", ego_input);
  c.ego_dense_input = ego_dense_input_from_string(ego_input);
  read(j, "egoDenseOut", c.ego_dense_out);
  read(j, "decoderHidden", c.decoder_hidden);
  read(j, "outputDim", c.output_dim);
  read(j, "autoregressive", c.autoregressive);
  read(j, "positionScale", c.position_scale);
  read(j, "batchNormMomentum", c.batch_norm.momentum);
  read(j, "batchNormEpsilon", c.batch_norm.epsilon);
  c.validate();
  return c;
}

std::uint64_t config_hash(const ModelConfig& config) {
  return ingest::fnv1a64(to_json(config).dump());
}

std::string hash_string(std::uint64_t hash) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace trackcast::model
