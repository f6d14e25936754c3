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

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "trackcast/errors.hpp"
#include "trackcast/ingest/archive.hpp"
#include "trackcast/ingest/split.hpp"
#include "trackcast/ingest/synthetic.hpp"
#include "trackcast/ingest/track.hpp"
#include "trackcast/ingest/window.hpp"

namespace trackcast::ingest {
namespace {

std::vector<TrackPoint> straight_track(std::int64_t vehicle, std::int64_t first, std::size_t frames,
                                       double y0 = 0.0, double vy = 3.0, int lane = 2) {
  std::vector<TrackPoint> pts;
  for (std::size_t f = 0; f < frames; ++f) {
    pts.push_back(TrackPoint::from_source(vehicle, first + static_cast<std::int64_t>(f), 6.0,
                                          y0 + vy * static_cast<double>(f), lane));
  }
  return pts;
}

void sort_points(std::vector<TrackPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const TrackPoint& a, const TrackPoint& b) {
    return std::tie(a.vehicle_id, a.frame_id) < std::tie(b.vehicle_id, b.frame_id);
  });
}

TEST(ParseTracks, ConvertsFeetToMeters) {
  std::istringstream in("Vehicle_ID,Frame_ID,Local_X,Local_Y,Lane_ID\n7,100,6.45,330.0,2\n");
  ParsedTracks t = parse_tracks(in);
  ASSERT_EQ(t.points.size(), 1u);
  const TrackPoint& p = t.points[0];
  EXPECT_EQ(p.vehicle_id, 7);
  EXPECT_EQ(p.frame_id, 100);
  EXPECT_NEAR(p.x, 1.966, 5e-4);
  EXPECT_NEAR(p.y, 100.584, 1e-9);
  EXPECT_EQ(p.lane_id, 2);
}

TEST(ParseTracks, EmptyInputGivesNothing) {
  std::istringstream in("");
  ParsedTracks t = parse_tracks(in);
  EXPECT_TRUE(t.points.empty());
  EXPECT_EQ(t.stats.malformed + t.stats.duplicates, 0u);
  EXPECT_TRUE(t.warnings.empty());
}

TEST(ParseTracks, DuplicateRowRejected) {
  std::istringstream in(
      "Vehicle_ID,Frame_ID,Local_X,Local_Y,Lane_ID\n1,5,0,10,1\n1,5,3,99,2\n1,4,0,9,1\n");
  ParsedTracks t = parse_tracks(in);
  ASSERT_EQ(t.points.size(), 2u);
  EXPECT_EQ(t.stats.duplicates, 1u);
  EXPECT_EQ(t.points[0].frame_id, 4);  // sorted
  EXPECT_EQ(t.points[1].source_y, 10 * kTicksPerSourceUnit);
}

TEST(ParseTracks, TabDelimitedWithExtraColumnsAndBadRows) {
  std::istringstream in(
      "Global_Time\tVehicle_ID\tFrame_ID\tLane_ID\tLocal_Y\tLocal_X\n"
      "0\t3\t1\t2\t10.5\t1\n"
      "0\t3\tx\t2\t10.5\t1\n"
      "0\t3\t2\n"
      "0\t3\t2.0\t2\t11\t1\n");
  ParsedTracks t = parse_tracks(in);
  EXPECT_EQ(t.stats.delimiter, '\t');
  EXPECT_EQ(t.stats.rows, 4u);
  EXPECT_EQ(t.stats.accepted, 2u);
  EXPECT_EQ(t.stats.malformed, 2u);
  EXPECT_EQ(t.warnings.size(), 2u);
}

TEST(ParseTracks, MissingColumnIsFatal) {
  std::istringstream in("Vehicle_ID,Frame_ID,Local_X,Lane_ID\n1,2,3,4\n");
  EXPECT_THROW(parse_tracks(in), InputError);
}

TEST(ParseTracks, CsvWriterRoundTrips) {
  auto pts = generate_highway({.vehicles = 5, .frames = 20});
  std::stringstream buf;
  write_tracks_csv(buf, pts);
  ParsedTracks back = parse_tracks(buf);
  ASSERT_EQ(back.points.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(back.points[i].source_x, pts[i].source_x);
    EXPECT_EQ(back.points[i].source_y, pts[i].source_y);
    EXPECT_EQ(back.points[i].lane_id, pts[i].lane_id);
  }
}

TEST(Window, EightyOneFramesGiveOneSample) {
  auto pts = straight_track(1, 1000, 81);
  WindowResult r = window_samples(pts, {});
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_EQ(r.samples[0].ego_history.size(), 16u);
  EXPECT_EQ(r.samples[0].future.size(), 25u);
  EXPECT_EQ(r.samples[0].meta.t0_frame, 1030);
  EXPECT_EQ(r.samples[0].ego_history.back(), (Position{0.0, 0.0}));
}

TEST(Window, EightyFramesGiveNone) {
  auto pts = straight_track(1, 0, 80);
  EXPECT_TRUE(window_samples(pts, {}).samples.empty());
}

TEST(Window, StationaryEgoIsAllZero) {
  auto pts = straight_track(1, 0, 90, 50.0, 0.0);
  WindowResult r = window_samples(pts, {});
  ASSERT_EQ(r.samples.size(), 10u);
  for (const auto& s : r.samples) {
    for (const Position& p : s.ego_history) EXPECT_EQ(p, (Position{0.0, 0.0}));
    for (const Position& p : s.future) EXPECT_EQ(p, (Position{0.0, 0.0}));
  }
}

TEST(Window, StrideThinsCandidates) {
  auto pts = straight_track(1, 0, 200);
  WindowConfig cfg;
  const auto all = window_samples(pts, cfg).samples.size();
  cfg.stride = 10;
  const auto thinned = window_samples(pts, cfg).samples.size();
  EXPECT_EQ(all, 120u);
  EXPECT_EQ(thinned, 12u);
}

TEST(Window, GapInEgoRecordSkipsCandidate) {
  auto pts = straight_track(1, 0, 82);
  pts.erase(pts.begin() + 40);  // frame 40 lies on the downsampled grid of t0 = 30 and 32 ...
  WindowResult r = window_samples(pts, {});
  EXPECT_EQ(r.stats.candidates, 2u);
  EXPECT_EQ(r.stats.skipped, 1u);  // t0 = 30 needs frame 40; t0 = 31 does not
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_EQ(r.samples[0].meta.t0_frame, 31);
}

TEST(Window, NeighbourWithShortHistoryIsMasked) {
  auto pts = straight_track(1, 0, 81);
  auto nb = straight_track(2, 20, 61, 20.0, 3.0, 2);  // appears at frame 20
  pts.insert(pts.end(), nb.begin(), nb.end());
  sort_points(pts);
  WindowResult r = window_samples(pts, {});
  ASSERT_EQ(r.samples.size(), 1u);
  ASSERT_EQ(r.samples[0].neighbors.size(), 1u);
  const NeighborTrack& track = r.samples[0].neighbors[0];
  // History frames 0, 2, ..., 30: frames < 20 are missing (10 steps).
  EXPECT_EQ(std::count(track.valid.begin(), track.valid.end(), 0), 10);
  EXPECT_EQ(track.history[0], (Position{0.0, 0.0}));
  EXPECT_EQ(track.valid.back(), 1);
}

TEST(GridAssign, WorkedExamples) {
  WindowConfig cfg;
  const TrackPoint ego = TrackPoint::from_source(1, 0, 6.0, 1000.0, 2);
  auto at = [&](double dy_ft, int lane) {
    return grid_assign(ego, TrackPoint::from_source(2, 0, 6.0, 1000.0 + dy_ft, lane), cfg);
  };
  EXPECT_EQ(at(20.0, 2), (GridCell{7, 1}));
  EXPECT_EQ(at(0.0, 2), (GridCell{6, 1}));
  EXPECT_EQ(at(100.0, 2), (GridCell{12, 1}));
  EXPECT_EQ(at(105.0, 2), std::nullopt);
  EXPECT_EQ(at(-90.0, 2), (GridCell{0, 1}));
  EXPECT_EQ(at(-90.001, 2), std::nullopt);
  EXPECT_EQ(at(15.0, 2), (GridCell{7, 1}));   // exact cell boundary
  EXPECT_EQ(at(14.999, 2), (GridCell{6, 1}));
  EXPECT_EQ(at(0.0, 1), (GridCell{6, 0}));
  EXPECT_EQ(at(0.0, 3), (GridCell{6, 2}));
  EXPECT_EQ(at(0.0, 4), std::nullopt);
}

TEST(GridAssign, BoundaryRowsAcrossOffsets) {
  WindowConfig cfg;
  for (double base : {0.0, 123.456, -9876.5, 1e6 + 0.125}) {
    const TrackPoint ego = TrackPoint::from_source(1, 0, 0.0, base, 2);
    for (int row = 0; row < 13; ++row) {
      const double lower = (row - 6) * 15.0;
      auto cell = grid_assign(ego, TrackPoint::from_source(2, 0, 0.0, base + lower, 2), cfg);
      ASSERT_TRUE(cell) << base << " row " << row;
      EXPECT_EQ(cell->row, row);
      auto inside = grid_assign(ego, TrackPoint::from_source(2, 0, 0.0, base + lower + 14.9, 2), cfg);
      ASSERT_TRUE(inside);
      EXPECT_EQ(inside->row, row);
    }
    EXPECT_FALSE(grid_assign(ego, TrackPoint::from_source(2, 0, 0.0, base + 105.0, 2), cfg));
    EXPECT_FALSE(grid_assign(ego, TrackPoint::from_source(2, 0, 0.0, base - 90.5, 2), cfg));
  }
}

TEST(Window, CellCollisionKeepsNearestThenLowerId) {
  auto pts = straight_track(1, 0, 81, 0.0, 0.0);
  for (auto [id, y] : std::vector<std::pair<int, double>>{{5, 17.0}, {3, 16.0}, {4, 16.0}}) {
    auto nb = straight_track(id, 0, 81, y, 0.0);
    pts.insert(pts.end(), nb.begin(), nb.end());
  }
  auto shadow = straight_track(9, 0, 81, 3.0, 0.0);  // lands on the ego cell
  pts.insert(pts.end(), shadow.begin(), shadow.end());
  sort_points(pts);
  WindowResult r = window_samples(pts, {});
  ASSERT_EQ(r.samples.size(), 5u);
  const TrajectorySample& s = r.samples[0];
  ASSERT_EQ(s.meta.vehicle_id, 1);
  ASSERT_EQ(s.neighbors.size(), 1u);
  EXPECT_EQ(s.neighbors[0].vehicle_id, 3);
  std::set<std::pair<int, int>> cells;
  for (const auto& sample : r.samples) {
    cells.clear();
    for (const auto& nb : sample.neighbors) {
      ASSERT_TRUE(nb.cell);
      EXPECT_TRUE(cells.insert({nb.cell->row, nb.cell->col}).second);
      EXPECT_FALSE(nb.cell->row == 6 && nb.cell->col == 1);
    }
  }
  EXPECT_GT(r.stats.collisions, 0u);
}

std::vector<TrackPoint> translated(std::vector<TrackPoint> pts, double dx, double dy) {
  for (auto& p : pts) {
    const double sx = static_cast<double>(p.source_x) / kTicksPerSourceUnit;
    const double sy = static_cast<double>(p.source_y) / kTicksPerSourceUnit;
    p = TrackPoint::from_source(p.vehicle_id, p.frame_id, sx + dx, sy + dy, p.lane_id);
  }
  return pts;
}

TEST(Properties, TranslationInvariance) {
  auto pts = generate_highway({.vehicles = 30, .frames = 100, .seed = 3});
  const auto base = window_samples(pts, {}).samples;
  ASSERT_FALSE(base.empty());
  for (auto [dx, dy] : std::vector<std::pair<double, double>>{
           {0.1, 0.2}, {-1234.567, 98765.4321}, {3.3, -7777.125}, {1e5, 1e5}}) {
    const auto moved = window_samples(translated(pts, dx, dy), {}).samples;
    ASSERT_EQ(moved.size(), base.size());
    for (std::size_t i = 0; i < base.size(); ++i) ASSERT_EQ(moved[i], base[i]) << dx << "," << dy;
  }
}

TEST(Properties, NoTemporalLeakage) {
  // Features must come only from frames <= t0 and labels only from frames > t0:
  // rewriting every later (resp. earlier) frame must leave features (resp.
  // labels) untouched.
  auto pts = generate_highway({.vehicles = 25, .frames = 90, .seed = 11});
  WindowConfig cfg;
  cfg.stride = 7;
  const auto base = window_samples(pts, cfg).samples;
  ASSERT_FALSE(base.empty());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> jitter(-50.0, 50.0);
  for (const TrajectorySample& s : base) {
    auto future_scrambled = pts;
    auto past_scrambled = pts;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const TrackPoint& p = pts[i];
      const double sx = static_cast<double>(p.source_x) / kTicksPerSourceUnit;
      const double sy = static_cast<double>(p.source_y) / kTicksPerSourceUnit;
      auto scrambled = TrackPoint::from_source(p.vehicle_id, p.frame_id, sx + jitter(rng),
                                               sy + jitter(rng), p.lane_id + 1);
      if (p.frame_id > s.meta.t0_frame) future_scrambled[i] = scrambled;
      if (p.frame_id < s.meta.t0_frame) past_scrambled[i] = scrambled;
    }
    auto find = [&](const std::vector<TrajectorySample>& all) {
      auto it = std::find_if(all.begin(), all.end(), [&](const TrajectorySample& x) {
        return x.meta == s.meta;
      });
      EXPECT_NE(it, all.end());
      return *it;
    };
    const TrajectorySample f = find(window_samples(future_scrambled, cfg).samples);
    EXPECT_EQ(f.ego_history, s.ego_history);
    EXPECT_EQ(f.neighbors, s.neighbors);
    EXPECT_NE(f.future, s.future);
    const TrajectorySample p = find(window_samples(past_scrambled, cfg).samples);
    EXPECT_EQ(p.future, s.future);
  }
}

std::vector<TrajectorySample> samples_for_vehicles(std::size_t vehicles, std::size_t per_vehicle) {
  std::vector<TrajectorySample> out;
  for (std::size_t v = 0; v < vehicles; ++v) {
    for (std::size_t k = 0; k < per_vehicle; ++k) {
      TrajectorySample s;
      s.meta = {0, static_cast<std::int64_t>(v), static_cast<std::int64_t>(k)};
      out.push_back(s);
    }
  }
  return out;
}

TEST(Split, ProportionsFollowRatios) {
  const auto samples = samples_for_vehicles(1000, 2);
  Partitions p = split_dataset(samples, {}, 42);
  EXPECT_NEAR(p.train.size() / 2000.0, 0.7, 0.03);
  EXPECT_NEAR(p.val.size() / 2000.0, 0.1, 0.03);
  EXPECT_NEAR(p.test.size() / 2000.0, 0.2, 0.03);
  EXPECT_EQ(p.train.size() + p.val.size() + p.test.size(), 2000u);
}

TEST(Split, DeterministicAndLeakFree) {
  const auto samples = samples_for_vehicles(200, 5);
  Partitions a = split_dataset(samples, {}, 7);
  Partitions b = split_dataset(samples, {}, 7);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.val, b.val);
  EXPECT_EQ(a.test, b.test);
  std::map<std::int64_t, int> owner;
  auto claim = [&](const std::vector<TrajectorySample>& part, int id) {
    for (const auto& s : part) {
      auto [it, fresh] = owner.emplace(s.meta.vehicle_id, id);
      EXPECT_EQ(it->second, id) << "vehicle " << s.meta.vehicle_id << " in two partitions";
    }
  };
  claim(a.train, 0);
  claim(a.val, 1);
  claim(a.test, 2);
  Partitions c = split_dataset(samples, {}, 8);
  EXPECT_NE(a.train, c.train);
}

TEST(Split, SingleVehicleAndEmptyInput) {
  const auto one = samples_for_vehicles(1, 6);
  Partitions p = split_dataset(one, {}, 1);
  const std::size_t sizes[] = {p.train.size(), p.val.size(), p.test.size()};
  EXPECT_EQ(std::count(std::begin(sizes), std::end(sizes), 6u), 1);
  Partitions e = split_dataset({}, {}, 1);
  EXPECT_TRUE(e.train.empty() && e.val.empty() && e.test.empty());
  EXPECT_THROW(split_dataset(one, {0.5, 0.2, 0.2}, 1), ConfigError);
}

TEST(Archive, RoundTripsBothFormats) {
  auto pts = generate_highway({.vehicles = 20, .frames = 90, .seed = 5});
  WindowConfig cfg;
  cfg.stride = 5;
  const auto samples = window_samples(pts, cfg, 3).samples;
  ASSERT_FALSE(samples.empty());
  for (ArchiveFormat format : {ArchiveFormat::kBinary, ArchiveFormat::kText}) {
    std::stringstream buf;
    write_archive(buf, samples, format);
    EXPECT_EQ(read_archive(buf), samples) << to_string(format);
  }
}

TEST(Archive, RejectsGarbage) {
  std::stringstream bad("TKSA\x05garbage");
  EXPECT_THROW(read_archive(bad), InputError);
  std::stringstream bad_json("{\"dataset\": 1}\n");
  EXPECT_THROW(read_archive(bad_json), InputError);
}

TEST(Synthetic, SeededAndSorted) {
  auto a = generate_highway({.vehicles = 10, .frames = 30, .seed = 1});
  auto b = generate_highway({.vehicles = 10, .frames = 30, .seed = 1});
  ASSERT_EQ(a.size(), 300u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].source_y, b[i].source_y);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), [](const TrackPoint& x, const TrackPoint& y) {
    return std::tie(x.vehicle_id, x.frame_id) < std::tie(y.vehicle_id, y.frame_id);
  }));
}

}  // namespace
}  // namespace trackcast::ingest
