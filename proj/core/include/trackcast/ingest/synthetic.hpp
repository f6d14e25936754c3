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
#include <vector>

#include "trackcast/ingest/track.hpp"

namespace trackcast::ingest {

/// Highway scene of constant-velocity vehicles, in NGSIM source units (feet,
/// 10 Hz frames). Every vehicle is on record for the same frame range.
struct SyntheticHighway {
  std::size_t vehicles = 40;
  std::size_t frames = 120;
  int lanes = 3;
  double lane_width = 12.0;       ///< ft
  double road_length = 600.0;     ///< ft, initial longitudinal spread
  double min_speed = 20.0;        ///< ft/s
  double max_speed = 60.0;        ///< ft/s
  double max_lateral_speed = 1.0; ///< ft/s
  std::uint64_t seed = 7;
};

/// Points sorted by (vehicle_id, frame_id); lane ids start at 1.
std::vector<TrackPoint> generate_highway(const SyntheticHighway& scene);

}  // namespace trackcast::ingest
