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

#include "trackcast/ingest/window.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <unordered_map>

#include "trackcast/errors.hpp"

namespace trackcast::ingest {

namespace {

// Absorbs ft -> m rounding when dy lands exactly on a cell boundary.
constexpr double kBoundaryTolerance = 1e-9;

double relative(std::int64_t from_source, std::int64_t to_source, double unit) {
  return ticks_to_meters(from_source, to_source, unit);
}

Position relative_position(const TrackPoint& anchor, const TrackPoint& p, double unit) {
  return {relative(anchor.source_x, p.source_x, unit), relative(anchor.source_y, p.source_y, unit)};
}

class TrackIndex {
 public:
  explicit TrackIndex(std::span<const TrackPoint> points) : points_(points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i > 0 && std::tie(points[i - 1].vehicle_id, points[i - 1].frame_id) >=
                       std::tie(points[i].vehicle_id, points[i].frame_id)) {
        throw ConfigError("window_samples: points must be sorted by (vehicle, frame) and unique");
      }
      auto& range = vehicles_[points[i].vehicle_id];
      if (range.second == 0) range.first = i;
      range.second = i + 1;
      by_frame_[points[i].frame_id].push_back(i);
    }
  }

  const TrackPoint* find(std::int64_t vehicle, std::int64_t frame) const {
    auto it = vehicles_.find(vehicle);
    if (it == vehicles_.end()) return nullptr;
    auto first = points_.begin() + static_cast<std::ptrdiff_t>(it->second.first);
    auto last = points_.begin() + static_cast<std::ptrdiff_t>(it->second.second);
    auto pos = std::lower_bound(first, last, frame,
                                [](const TrackPoint& p, std::int64_t f) { return p.frame_id < f; });
    return (pos != last && pos->frame_id == frame) ? &*pos : nullptr;
  }

  const std::map<std::int64_t, std::pair<std::size_t, std::size_t>>& vehicles() const {
    return vehicles_;
  }
  std::span<const TrackPoint> points() const { return points_; }

  const std::vector<std::size_t>& at_frame(std::int64_t frame) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = by_frame_.find(frame);
    return it == by_frame_.end() ? kEmpty : it->second;
  }

 private:
  std::span<const TrackPoint> points_;
  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> vehicles_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> by_frame_;
};

}  // namespace

std::optional<GridCell> grid_assign(const TrackPoint& ego, const TrackPoint& neighbor,
                                    const WindowConfig& config) {
  const int col = (neighbor.lane_id - ego.lane_id) + config.grid_cols / 2;
  if (col < 0 || col >= config.grid_cols) return std::nullopt;
  const double dy = relative(ego.source_y, neighbor.source_y, config.unit_to_meters);
  const double cells = std::floor(dy / config.cell_length + kBoundaryTolerance);
  const double row = cells + config.grid_rows / 2;
  if (row < 0 || row >= config.grid_rows) return std::nullopt;
  return GridCell{static_cast<int>(row), col};
}

WindowResult window_samples(std::span<const TrackPoint> points, const WindowConfig& config,
                            std::uint32_t dataset_id) {
  if (config.sample_every == 0 || config.stride == 0) {
    throw ConfigError("window_samples: sample_every and stride must be positive");
  }
  WindowResult result;
  const TrackIndex index(points);
  const auto hist = static_cast<std::int64_t>(config.history_frames);
  const auto fut = static_cast<std::int64_t>(config.future_frames);
  const auto every = static_cast<std::int64_t>(config.sample_every);
  const auto stride = static_cast<std::int64_t>(config.stride);
  const GridCell ego_cell{config.grid_rows / 2, config.grid_cols / 2};

  for (const auto& [vehicle, range] : index.vehicles()) {
    const std::int64_t first = points[range.first].frame_id;
    const std::int64_t last = points[range.second - 1].frame_id;
    for (std::int64_t t0 = first + hist; t0 + fut <= last; t0 += stride) {
      ++result.stats.candidates;
      bool complete = true;
      for (std::int64_t f = t0 - hist; f <= t0 + fut && complete; f += every) {
        complete = index.find(vehicle, f) != nullptr;
      }
      if (!complete) {
        ++result.stats.skipped;
        continue;
      }
      const TrackPoint& anchor = *index.find(vehicle, t0);
      TrajectorySample sample;
      sample.meta = {dataset_id, vehicle, t0};
      for (std::int64_t f = t0 - hist; f <= t0; f += every) {
        sample.ego_history.push_back(relative_position(anchor, *index.find(vehicle, f),
                                                       config.unit_to_meters));
      }
      for (std::int64_t f = t0 + every; f <= t0 + fut; f += every) {
        sample.future.push_back(relative_position(anchor, *index.find(vehicle, f),
                                                  config.unit_to_meters));
      }

      struct Candidate {
        GridCell cell;
        double distance;
        std::int64_t vehicle;
      };
      std::vector<Candidate> candidates;
      for (std::size_t i : index.at_frame(t0)) {
        const TrackPoint& other = points[i];
        if (other.vehicle_id == vehicle) continue;
        auto cell = grid_assign(anchor, other, config);
        if (!cell) {
          ++result.stats.outside;
          continue;
        }
        double dy = std::abs(relative(anchor.source_y, other.source_y, config.unit_to_meters));
        candidates.push_back({*cell, dy, other.vehicle_id});
      }
      std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.cell.row, a.cell.col, a.distance, a.vehicle) <
               std::tie(b.cell.row, b.cell.col, b.distance, b.vehicle);
      });
      std::vector<Candidate> winners;
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        const bool taken = candidates[k].cell == ego_cell ||
                           (k > 0 && candidates[k - 1].cell == candidates[k].cell);
        if (taken) {
          ++result.stats.collisions;
        } else {
          winners.push_back(candidates[k]);
        }
      }
      std::sort(winners.begin(), winners.end(),
                [](const Candidate& a, const Candidate& b) { return a.vehicle < b.vehicle; });
      for (const Candidate& w : winners) {
        NeighborTrack track;
        track.vehicle_id = w.vehicle;
        track.cell = w.cell;
        for (std::int64_t f = t0 - hist; f <= t0; f += every) {
          const TrackPoint* p = index.find(w.vehicle, f);
          track.history.push_back(p ? relative_position(anchor, *p, config.unit_to_meters)
                                    : Position{0.0, 0.0});
          track.valid.push_back(p ? 1 : 0);
        }
        sample.neighbors.push_back(std::move(track));
      }
      result.stats.neighbors += sample.neighbors.size();
      result.samples.push_back(std::move(sample));
      ++result.stats.samples;
    }
  }
  return result;
}

}  // namespace trackcast::ingest
