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

#include "trackcast/ingest/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "trackcast/errors.hpp"

namespace trackcast::ingest {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Partitions split_dataset(std::span<const TrajectorySample> samples, SplitRatios ratios,
                         std::uint64_t seed) {
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be non-negative and sum to 1");
  }
  using Key = std::pair<std::uint32_t, std::int64_t>;
  std::map<Key, std::uint64_t> hashes;
  for (const auto& s : samples) {
    Key key{s.meta.dataset_id, s.meta.vehicle_id};
    if (hashes.count(key)) continue;
    std::uint64_t h = splitmix64(seed ^ splitmix64(s.meta.dataset_id));
    h = splitmix64(h ^ static_cast<std::uint64_t>(s.meta.vehicle_id));
    hashes.emplace(key, h);
  }
  std::vector<std::pair<std::uint64_t, Key>> order;
  for (const auto& [key, h] : hashes) order.emplace_back(h, key);
  std::sort(order.begin(), order.end());

  const double n = static_cast<double>(order.size());
  const auto train_end = static_cast<std::size_t>(std::llround(ratios.train * n));
  const auto val_end =
      std::min(order.size(), static_cast<std::size_t>(std::llround((ratios.train + ratios.val) * n)));
  std::map<Key, int> assignment;
  for (std::size_t i = 0; i < order.size(); ++i) {
    assignment[order[i].second] = i < train_end ? 0 : (i < val_end ? 1 : 2);
  }

  Partitions parts;
  for (const auto& s : samples) {
    switch (assignment.at({s.meta.dataset_id, s.meta.vehicle_id})) {
      case 0: parts.train.push_back(s); break;
      case 1: parts.val.push_back(s); break;
      default: parts.test.push_back(s); break;
    }
  }
  return parts;
}

}  // namespace trackcast::ingest
