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

#include "trackcast/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "trackcast/errors.hpp"
#include "trackcast/model/batch.hpp"

namespace trackcast::train {

using nlohmann::json;

namespace {

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_double(const std::string* text, const char* key) {
  if (!text) throw InputError(std::string("resume checkpoint lacks '") + key + "'");
  char* end = nullptr;
  const double v = std::strtod(text->c_str(), &end);
  if (end == text->c_str()) throw InputError(std::string("bad value for '") + key + "'");
  return v;
}

std::uint64_t parse_uint(const std::string* text, const char* key) {
  if (!text) throw InputError(std::string("resume checkpoint lacks '") + key + "'");
  try {
    return std::stoull(*text);
  } catch (const std::exception&) {
    throw InputError(std::string("bad value for '") + key + "'");
  }
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(mix(seed ^ mix(epoch)));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  return order;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("train config key '") + key + "': " + e.what());
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("batchSize must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learningRate must be > 0");
  if (!(clip > 0.0)) throw ConfigError("clip must be > 0");
  if (!(plateau_factor > 0.0 && plateau_factor <= 1.0)) {
    throw ConfigError("plateauFactor must lie in (0, 1]");
  }
  if (plateau_patience == 0) throw ConfigError("plateauPatience must be >= 1");
  if (plateau_threshold < 0.0) throw ConfigError("plateauThreshold must be >= 0");
}

json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batchSize", c.batch_size},
          {"learningRate", c.learning_rate},
          {"clip", c.clip},
          {"clipMode", num::to_string(c.clip_mode)},
          {"plateauFactor", c.plateau_factor},
          {"plateauPatience", c.plateau_patience},
          {"plateauThreshold", c.plateau_threshold},
          {"loss", to_string(c.loss)},
          {"seed", c.seed}};
}

TrainConfig train_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("train config: expected an object");
  static const char* const kKeys[] = {"epochs",        "batchSize",       "learningRate",
                                      "clip",          "clipMode",        "plateauFactor",
                                      "plateauPatience", "plateauThreshold", "loss", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw ConfigError("train config: unknown key '" + key + "'");
    }
  }
  TrainConfig c;
  read(j, "epochs", c.epochs);
  read(j, "batchSize", c.batch_size);
  read(j, "learningRate", c.learning_rate);
  read(j, "clip", c.clip);
  std::string clip_mode = num::to_string(c.clip_mode);
  read(j, "clipMode", clip_mode);
  try {
    c.clip_mode = num::clip_mode_from_string(clip_mode);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  read(j, "plateauFactor", c.plateau_factor);
  read(j, "plateauPatience", c.plateau_patience);
  read(j, "plateauThreshold", c.plateau_threshold);
  std::string loss = to_string(c.loss);
  read(j, "loss", loss);
  c.loss = loss_kind_from_string(loss);
  read(j, "seed", c.seed);
  c.validate();
  return c;
}

bool plateau_update(PlateauState& state, double val_loss, const TrainConfig& config, double& lr) {
  const bool significant = val_loss < state.best - config.plateau_threshold;
  const bool new_best = val_loss < state.best;
  if (new_best) state.best = val_loss;
  if (significant) {
    state.bad_epochs = 0;
  } else if (++state.bad_epochs >= config.plateau_patience) {
    lr *= config.plateau_factor;
    ++state.reductions;
    state.bad_epochs = 0;
  }
  return new_best;
}

double dataset_loss(model::TrajectoryModel& model, std::span<const ingest::TrajectorySample> samples,
                    LossKind kind, std::size_t batch_size) {
  if (samples.empty()) throw ConfigError("dataset_loss: no samples");
  double total = 0.0;
  for (std::size_t start = 0; start < samples.size(); start += batch_size) {
    const auto chunk = samples.subspan(start, std::min(batch_size, samples.size() - start));
    model::Batch batch = model::collate(chunk, model.config());
    num::Tensor pred = model.forward(batch, num::Mode::kEval);
    total += trajectory_loss(pred, batch.target, kind).item() * static_cast<double>(chunk.size());
  }
  return total / static_cast<double>(samples.size());
}

TrainResult train(model::TrajectoryModel& model, std::span<const ingest::TrajectorySample> train_set,
                  std::span<const ingest::TrajectorySample> val_set, const TrainConfig& config,
                  TrainState state, const TrainHooks& hooks) {
  config.validate();
  if (train_set.empty()) throw ConfigError("train: empty training set");
  TrainResult result;
  if (state.adam.step == 0 && state.epochs_done == 0) {
    state.adam.options.lr = config.learning_rate;
  }
  state.adam.options.clip = config.clip;
  state.adam.options.clip_mode = config.clip_mode;
  num::ParameterList params = model.parameters();

  for (std::size_t epoch = state.epochs_done; epoch < config.epochs; ++epoch) {
    const auto order = epoch_order(train_set.size(), config.seed, epoch);
    EpochRecord record;
    record.epoch = epoch + 1;
    record.lr = state.adam.options.lr;
    double total = 0.0;
    try {
      for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
        const std::size_t end = std::min(order.size(), start + config.batch_size);
        std::vector<const ingest::TrajectorySample*> chunk;
        for (std::size_t i = start; i < end; ++i) chunk.push_back(&train_set[order[i]]);
        model::Batch batch = model::collate(chunk, model.config());
        num::Tensor pred = model.forward(batch, num::Mode::kTrain);
        num::Tensor loss = trajectory_loss(pred, batch.target, config.loss);
        if (!std::isfinite(loss.item())) throw NumericError("non-finite training loss");
        num::zero_grads(params);
        loss.backward();
        num::adam_step(params, state.adam);
        total += loss.item() * static_cast<double>(chunk.size());
      }
      record.train_loss = total / static_cast<double>(train_set.size());
      record.val_loss = val_set.empty()
                            ? record.train_loss
                            : dataset_loss(model, val_set, config.loss, config.batch_size);
      if (!std::isfinite(record.val_loss)) throw NumericError("non-finite validation loss");
    } catch (const NumericError& e) {
      result.status = TrainStatus::kDiverged;
      result.message = "epoch " + std::to_string(epoch + 1) + ": " + e.what();
      result.state = std::move(state);
      return result;
    }

    record.improved = plateau_update(state.plateau, record.val_loss, config, state.adam.options.lr);
    if (record.improved || !state.best) state.best = model.to_checkpoint();
    state.history.push_back(record);
    state.epochs_done = epoch + 1;
    if (hooks.on_epoch) hooks.on_epoch(record, state, model);
  }
  if (state.best) model.load(*state.best);
  result.state = std::move(state);
  return result;
}

num::Checkpoint resume_checkpoint(model::TrajectoryModel& model, const TrainState& state) {
  num::Checkpoint ckpt = model.to_checkpoint();
  const num::ParameterList params = model.parameters();
  for (std::size_t i = 0; i < state.adam.first_moment.size() && i < params.size(); ++i) {
    ckpt.records.push_back({"adam.m." + params[i].name, params[i].tensor.shape(),
                            state.adam.first_moment[i]});
    ckpt.records.push_back({"adam.v." + params[i].name, params[i].tensor.shape(),
                            state.adam.second_moment[i]});
  }
  ckpt.set_meta("train.epochs_done", std::to_string(state.epochs_done));
  ckpt.set_meta("train.adam_step", std::to_string(state.adam.step));
  ckpt.set_meta("train.lr", hex_double(state.adam.options.lr));
  ckpt.set_meta("train.plateau_best", hex_double(state.plateau.best));
  ckpt.set_meta("train.plateau_bad_epochs", std::to_string(state.plateau.bad_epochs));
  ckpt.set_meta("train.plateau_reductions", std::to_string(state.plateau.reductions));
  json history = json::array();
  for (const EpochRecord& r : state.history) {
    history.push_back({hex_double(r.train_loss), hex_double(r.val_loss), hex_double(r.lr),
                       r.improved});
  }
  ckpt.set_meta("train.history", history.dump());
  return ckpt;
}

TrainState restore_resume_checkpoint(model::TrajectoryModel& model, const num::Checkpoint& ckpt) {
  if (!ckpt.meta("train.epochs_done")) {
    throw InputError("checkpoint holds no training state (not a resume checkpoint)");
  }
  model.load(ckpt);
  TrainState state;
  state.epochs_done = parse_uint(ckpt.meta("train.epochs_done"), "train.epochs_done");
  state.adam.step = parse_uint(ckpt.meta("train.adam_step"), "train.adam_step");
  state.adam.options.lr = parse_double(ckpt.meta("train.lr"), "train.lr");
  state.plateau.best = parse_double(ckpt.meta("train.plateau_best"), "train.plateau_best");
  state.plateau.bad_epochs =
      parse_uint(ckpt.meta("train.plateau_bad_epochs"), "train.plateau_bad_epochs");
  state.plateau.reductions =
      parse_uint(ckpt.meta("train.plateau_reductions"), "train.plateau_reductions");
  if (state.adam.step > 0) {
    for (const auto& p : model.parameters()) {
      const num::TensorRecord* m = ckpt.find("adam.m." + p.name);
      const num::TensorRecord* v = ckpt.find("adam.v." + p.name);
      if (!m || !v || m->values.size() != p.tensor.size() || v->values.size() != p.tensor.size()) {
        throw InputError("resume checkpoint has missing or misshapen optimizer state for '" +
                         p.name + "'");
      }
      state.adam.first_moment.push_back(m->values);
      state.adam.second_moment.push_back(v->values);
    }
  }
  if (const std::string* h = ckpt.meta("train.history")) {
    try {
      std::size_t epoch = 0;
      for (const json& r : json::parse(*h)) {
        EpochRecord rec;
        rec.epoch = ++epoch;
        rec.train_loss = std::strtod(r.at(0).get<std::string>().c_str(), nullptr);
        rec.val_loss = std::strtod(r.at(1).get<std::string>().c_str(), nullptr);
        rec.lr = std::strtod(r.at(2).get<std::string>().c_str(), nullptr);
        rec.improved = r.at(3).get<bool>();
        state.history.push_back(rec);
      }
    } catch (const json::exception& e) {
      throw InputError(std::string("resume checkpoint history is malformed: ") + e.what());
    }
  }
  return state;
}

}  // namespace trackcast::train
