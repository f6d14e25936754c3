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
#include <span>
#include <vector>

#include "trackcast/ingest/sample.hpp"
#include "trackcast/model/config.hpp"
#include "trackcast/num/tensor.hpp"

namespace trackcast::model {

/// Model-ready view of a group of samples. Positions are divided by the
/// configured position scale; channel 0 is x, channel 1 is y.
struct Batch {
  std::size_t size = 0;
  num::Tensor ego_history;        ///< [B x 2 x T]
  num::Tensor neighbor_history;   ///< [N x 2 x T]; undefined when N == 0
  std::vector<std::size_t> slots; ///< flat grid slot per neighbour row
  num::Tensor target;             ///< [B x horizon x 2] meters; undefined without futures
};

/// Neighbours outside the grid are dropped. Throws ConfigError when a history
/// or future length differs from the configuration, or two neighbours share a cell.
Batch collate(std::span<const ingest::TrajectorySample> samples, const ModelConfig& config,
              bool with_target = true);
Batch collate(std::span<const ingest::TrajectorySample* const> samples, const ModelConfig& config,
              bool with_target = true);

}  // namespace trackcast::model
