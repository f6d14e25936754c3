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

#include "trackcast/model/batch.hpp"

#include <set>

#include "trackcast/errors.hpp"

namespace trackcast::model {

Batch collate(std::span<const ingest::TrajectorySample* const> samples, const ModelConfig& config,
              bool with_target) {
  const std::size_t b = samples.size();
  const std::size_t t = config.history_steps;
  const std::size_t cells = config.grid_rows * config.grid_cols;
  const double inv = 1.0 / config.position_scale;
  if (b == 0) throw ConfigError("collate: empty batch");

  std::vector<double> ego(b * 2 * t);
  std::vector<double> neighbors;
  std::vector<double> target;
  Batch batch;
  batch.size = b;
  for (std::size_t s = 0; s < b; ++s) {
    const ingest::TrajectorySample& sample = *samples[s];
    if (sample.ego_history.size() != t) {
      throw ConfigError("collate: ego history has " + std::to_string(sample.ego_history.size()) +
                        " steps, model expects " + std::to_string(t));
    }
    for (std::size_t k = 0; k < t; ++k) {
      ego[(s * 2 + 0) * t + k] = sample.ego_history[k][0] * inv;
      ego[(s * 2 + 1) * t + k] = sample.ego_history[k][1] * inv;
    }
    std::set<std::size_t> used;
    for (const ingest::NeighborTrack& nb : sample.neighbors) {
      if (!nb.cell) continue;
      if (nb.history.size() != t) throw ConfigError("collate: neighbour history length mismatch");
      const auto row = static_cast<std::size_t>(nb.cell->row);
      const auto col = static_cast<std::size_t>(nb.cell->col);
      if (nb.cell->row < 0 || nb.cell->col < 0 || row >= config.grid_rows ||
          col >= config.grid_cols) {
        throw ConfigError("collate: neighbour cell outside the configured grid");
      }
      const std::size_t slot = s * cells + row * config.grid_cols + col;
      if (!used.insert(slot).second) throw ConfigError("collate: two neighbours share a grid cell");
      batch.slots.push_back(slot);
      const std::size_t base = neighbors.size();
      neighbors.resize(base + 2 * t);
      for (std::size_t k = 0; k < t; ++k) {
        neighbors[base + k] = nb.history[k][0] * inv;
        neighbors[base + t + k] = nb.history[k][1] * inv;
      }
    }
    if (with_target) {
      if (sample.future.size() != config.horizon_steps) {
        throw ConfigError("collate: future has " + std::to_string(sample.future.size()) +
                          " steps, model predicts " + std::to_string(config.horizon_steps));
      }
      for (const ingest::Position& p : sample.future) {
        target.push_back(p[0]);
        target.push_back(p[1]);
      }
    }
  }
  batch.ego_history = num::Tensor::from({b, 2, t}, std::move(ego));
  if (!batch.slots.empty()) {
    batch.neighbor_history = num::Tensor::from({batch.slots.size(), 2, t}, std::move(neighbors));
  }
  if (with_target) batch.target = num::Tensor::from({b, config.horizon_steps, 2}, std::move(target));
  return batch;
}

Batch collate(std::span<const ingest::TrajectorySample> samples, const ModelConfig& config,
              bool with_target) {
  std::vector<const ingest::TrajectorySample*> ptrs;
  ptrs.reserve(samples.size());
  for (const auto& s : samples) ptrs.push_back(&s);
  return collate(std::span<const ingest::TrajectorySample* const>(ptrs), config, with_target);
}

}  // namespace trackcast::model
