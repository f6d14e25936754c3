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

#include "trackcast/ingest/track.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string_view>
#include <tuple>

#include "trackcast/errors.hpp"

namespace trackcast::ingest {

namespace {

std::int64_t to_ticks(double v) {
  if (!(std::abs(v) <= kMaxSourceCoordinate)) {
    throw InputError("source coordinate out of range: " + std::to_string(v));
  }
  return std::llround(v * static_cast<double>(kTicksPerSourceUnit));
}

}  // namespace

double ticks_to_meters(std::int64_t from, std::int64_t to, double unit_to_meters) {
  return static_cast<double>(to - from) / static_cast<double>(kTicksPerSourceUnit) * unit_to_meters;
}

TrackPoint TrackPoint::from_source(std::int64_t vehicle, std::int64_t frame, double sx, double sy,
                                   int lane, double unit_to_meters) {
  TrackPoint p;
  p.vehicle_id = vehicle;
  p.frame_id = frame;
  p.source_x = to_ticks(sx);
  p.source_y = to_ticks(sy);
  p.x = ticks_to_meters(0, p.source_x, unit_to_meters);
  p.y = ticks_to_meters(0, p.source_y, unit_to_meters);
  p.lane_id = lane;
  return p;
}

namespace {

constexpr std::size_t kMaxWarnings = 20;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delim, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_integer_field(std::string_view s, std::int64_t& out) {
  if (parse_number(s, out)) return true;
  // Some exports write integral columns as "7.0".
  double d = 0;
  if (!parse_number(s, d) || d != static_cast<double>(static_cast<std::int64_t>(d))) return false;
  out = static_cast<std::int64_t>(d);
  return true;
}

}  // namespace

ParsedTracks parse_tracks(std::istream& in, double unit_to_meters) {
  ParsedTracks result;
  std::string header;
  while (std::getline(in, header)) {
    if (!trim(header).empty()) break;
  }
  if (trim(header).empty()) return result;

  const char delim = std::count(header.begin(), header.end(), '\t') >
                             std::count(header.begin(), header.end(), ',')
                         ? '\t'
                         : ',';
  result.stats.delimiter = delim;
  const auto names = split(header, delim);
  constexpr std::array<std::string_view, 5> kRequired{"Vehicle_ID", "Frame_ID", "Local_X",
                                                      "Local_Y", "Lane_ID"};
  std::array<std::size_t, 5> column{};
  for (std::size_t r = 0; r < kRequired.size(); ++r) {
    auto it = std::find(names.begin(), names.end(), kRequired[r]);
    if (it == names.end()) {
      throw InputError("missing required column '" + std::string(kRequired[r]) + "'");
    }
    column[r] = static_cast<std::size_t>(it - names.begin());
  }

  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  std::string line;
  std::size_t line_no = 1;
  auto warn = [&](const std::string& msg) {
    if (result.warnings.size() < kMaxWarnings) {
      result.warnings.push_back("line " + std::to_string(line_no) + ": " + msg);
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++result.stats.rows;
    const auto fields = split(line, delim);
    if (fields.size() != names.size()) {
      ++result.stats.malformed;
      warn("expected " + std::to_string(names.size()) + " fields, got " + std::to_string(fields.size()));
      continue;
    }
    std::int64_t vehicle = 0, frame = 0, lane = 0;
    double sx = 0, sy = 0;
    if (!parse_integer_field(fields[column[0]], vehicle) ||
        !parse_integer_field(fields[column[1]], frame) || !parse_number(fields[column[2]], sx) ||
        !parse_number(fields[column[3]], sy) || !parse_integer_field(fields[column[4]], lane)) {
      ++result.stats.malformed;
      warn("unparseable value");
      continue;
    }
    if (!(std::abs(sx) <= kMaxSourceCoordinate && std::abs(sy) <= kMaxSourceCoordinate)) {
      ++result.stats.malformed;
      warn("coordinate out of range");
      continue;
    }
    if (!seen.emplace(vehicle, frame).second) {
      ++result.stats.duplicates;
      warn("duplicate (vehicle " + std::to_string(vehicle) + ", frame " + std::to_string(frame) + ")");
      continue;
    }
    result.points.push_back(
        TrackPoint::from_source(vehicle, frame, sx, sy, static_cast<int>(lane), unit_to_meters));
    ++result.stats.accepted;
  }
  std::sort(result.points.begin(), result.points.end(), [](const TrackPoint& a, const TrackPoint& b) {
    return std::tie(a.vehicle_id, a.frame_id) < std::tie(b.vehicle_id, b.frame_id);
  });
  return result;
}

ParsedTracks parse_tracks_file(const std::filesystem::path& path, double unit_to_meters) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_tracks(in, unit_to_meters);
}

namespace {

// Exact decimal form of a tick count, e.g. -1500001 -> "-1.500001".
std::string format_ticks(std::int64_t ticks) {
  const bool negative = ticks < 0;
  const std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(ticks)
                                     : static_cast<std::uint64_t>(ticks);
  std::string frac = std::to_string(mag % kTicksPerSourceUnit);
  frac.insert(0, 6 - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(mag / kTicksPerSourceUnit) + "." + frac;
}

}  // namespace

void write_tracks_csv(std::ostream& out, const std::vector<TrackPoint>& points) {
  out << "Vehicle_ID,Frame_ID,Local_X,Local_Y,Lane_ID\n";
  for (const auto& p : points) {
    out << p.vehicle_id << ',' << p.frame_id << ',' << format_ticks(p.source_x) << ','
        << format_ticks(p.source_y) << ',' << p.lane_id << '\n';
  }
}

}  // namespace trackcast::ingest
