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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace trackcast::ingest {

inline constexpr double kFeetToMeters = 0.3048;
/// Source coordinates are stored as integer multiples of 1e-6 source units.
inline constexpr std::int64_t kTicksPerSourceUnit = 1'000'000;
/// Largest accepted |source coordinate|.
inline constexpr double kMaxSourceCoordinate = 1e9;

/// One vehicle position at one 10 Hz frame.
///
/// `x`/`y` are meters. Source coordinates are also kept in fixed point so
/// that relative positions come from exact integer differences; samples are
/// then bit-identical under any translation of the source frame that is
/// itself a multiple of the tick.
struct TrackPoint {
  std::int64_t vehicle_id = 0;
  std::int64_t frame_id = 0;
  double x = 0.0;  ///< lateral, meters
  double y = 0.0;  ///< longitudinal, meters
  int lane_id = 0;
  std::int64_t source_x = 0;  ///< ticks
  std::int64_t source_y = 0;  ///< ticks

  /// Rounds to the nearest tick. Throws InputError beyond kMaxSourceCoordinate.
  static TrackPoint from_source(std::int64_t vehicle, std::int64_t frame, double source_x,
                                double source_y, int lane, double unit_to_meters = kFeetToMeters);
};

/// Meters between two tick coordinates (to - from).
double ticks_to_meters(std::int64_t from, std::int64_t to, double unit_to_meters);

struct ParseStats {
  std::size_t rows = 0;        ///< data rows seen (header excluded)
  std::size_t accepted = 0;
  std::size_t malformed = 0;   ///< wrong field count or unparseable value
  std::size_t duplicates = 0;  ///< repeated (vehicle, frame); later row dropped
  char delimiter = ',';
};

struct ParsedTracks {
  std::vector<TrackPoint> points;  ///< sorted by (vehicle_id, frame_id)
  ParseStats stats;
  std::vector<std::string> warnings;  ///< first few diagnostics, for display
};

/// Reads a delimited NGSIM-style table (comma or tab, detected from the
/// header). Required columns: Vehicle_ID, Frame_ID, Local_X, Local_Y, Lane_ID.
/// Throws InputError when a required column is missing.
ParsedTracks parse_tracks(std::istream& in, double unit_to_meters = kFeetToMeters);
ParsedTracks parse_tracks_file(const std::filesystem::path& path,
                               double unit_to_meters = kFeetToMeters);

/// Writes points in the same table format parse_tracks reads (source units).
void write_tracks_csv(std::ostream& out, const std::vector<TrackPoint>& points);

}  // namespace trackcast::ingest
