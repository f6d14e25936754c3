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
#include <optional>
#include <span>
#include <vector>

#include "trackcast/ingest/sample.hpp"
#include "trackcast/ingest/track.hpp"

namespace trackcast::ingest {

/// Windowing and grid parameters. Defaults: 10 Hz source, 3 s history and 5 s
/// future at 5 Hz, 13 x 3 grid with 15 ft cells.
struct WindowConfig {
  std::size_t history_frames = 30;  ///< source frames before t0
  std::size_t future_frames = 50;   ///< source frames after t0
  std::size_t sample_every = 2;     ///< downsampling factor
  std::size_t stride = 1;           ///< source frames between consecutive t0 candidates
  int grid_rows = 13;
  int grid_cols = 3;
  double cell_length = 4.572;       ///< meters per grid row
  double unit_to_meters = kFeetToMeters;

  std::size_t history_steps() const { return history_frames / sample_every + 1; }
  std::size_t future_steps() const { return future_frames / sample_every; }
};

struct WindowStats {
  std::size_t candidates = 0;  ///< t0 frames considered
  std::size_t skipped = 0;     ///< candidates missing required ego frames
  std::size_t samples = 0;
  std::size_t neighbors = 0;   ///< in-grid neighbours kept
  std::size_t outside = 0;     ///< neighbours at t0 that fell outside the grid
  std::size_t collisions = 0;  ///< neighbours that lost a cell to a nearer vehicle
};

/// Grid cell of `neighbor` relative to `ego` (both at the same frame), or
/// nullopt when it falls outside.
///   col = lane difference + grid_cols / 2
///   row = floor(dy / cell_length) + grid_rows / 2
std::optional<GridCell> grid_assign(const TrackPoint& ego, const TrackPoint& neighbor,
                                    const WindowConfig& config);

struct WindowResult {
  std::vector<TrajectorySample> samples;  ///< ordered by (vehicle_id, t0)
  WindowStats stats;
};

/// Builds every eligible window of one dataset segment. `points` must be
/// sorted by (vehicle_id, frame_id), as parse_tracks returns them.
WindowResult window_samples(std::span<const TrackPoint> points, const WindowConfig& config,
                            std::uint32_t dataset_id = 0);

}  // namespace trackcast::ingest
