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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace trackcast::ingest {

/// Position relative to the ego vehicle at t0, meters (x lateral, y longitudinal).
using Position = std::array<double, 2>;

/// Cell of the ego-centred social grid. Rows run longitudinally (row 0 is the
/// furthest behind), columns are lanes (column 0 is the lane to the left).
struct GridCell {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct NeighborTrack {
  std::int64_t vehicle_id = 0;
  std::vector<Position> history;   ///< same length as the ego history; zero where invalid
  std::vector<std::uint8_t> valid; ///< 1 where the neighbour was observed at that step
  std::optional<GridCell> cell;    ///< nullopt: outside the grid, ignored by the model
  friend bool operator==(const NeighborTrack&, const NeighborTrack&) = default;
};

struct SampleMeta {
  std::uint32_t dataset_id = 0;
  std::int64_t vehicle_id = 0;
  std::int64_t t0_frame = 0;
  friend bool operator==(const SampleMeta&, const SampleMeta&) = default;
};

/// One training/evaluation example. All positions are relative to the ego
/// position at t0, so ego_history.back() is (0, 0).
struct TrajectorySample {
  std::vector<Position> ego_history;  ///< oldest first, t0 last
  std::vector<NeighborTrack> neighbors;
  std::vector<Position> future;       ///< first predicted step first
  SampleMeta meta;
  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

}  // namespace trackcast::ingest
