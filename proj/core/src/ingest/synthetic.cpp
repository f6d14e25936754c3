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

#include "trackcast/ingest/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace trackcast::ingest {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<TrackPoint> generate_highway(const SyntheticHighway& scene) {
  std::mt19937_64 rng(scene.seed);
  std::vector<TrackPoint> points;
  points.reserve(scene.vehicles * scene.frames);
  for (std::size_t v = 0; v < scene.vehicles; ++v) {
    const int lane = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(scene.lanes));
    const double x0 = (lane - 0.5) * scene.lane_width + (unit(rng) - 0.5) * 2.0;
    const double y0 = unit(rng) * scene.road_length;
    const double vy = scene.min_speed + unit(rng) * (scene.max_speed - scene.min_speed);
    const double vx = (2.0 * unit(rng) - 1.0) * scene.max_lateral_speed;
    for (std::size_t f = 0; f < scene.frames; ++f) {
      const double t = static_cast<double>(f) / 10.0;
      const double x = x0 + vx * t;
      const int current_lane =
          std::clamp(static_cast<int>(std::floor(x / scene.lane_width)) + 1, 1, scene.lanes);
      points.push_back(TrackPoint::from_source(static_cast<std::int64_t>(v + 1),
                                               static_cast<std::int64_t>(f), x, y0 + vy * t,
                                               current_lane));
    }
  }
  return points;
}

}  // namespace trackcast::ingest
