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

#include <cstdint>
#include <span>
#include <vector>

#include "trackcast/ingest/sample.hpp"

namespace trackcast::ingest {

struct SplitRatios {
  double train = 0.7;
  double val = 0.1;
  double test = 0.2;
};

struct Partitions {
  std::vector<TrajectorySample> train;
  std::vector<TrajectorySample> val;
  std::vector<TrajectorySample> test;
};

/// Partitions samples by ego vehicle so that every window of a vehicle lands in
/// exactly one partition. Vehicles are ordered by a seeded hash of
/// (dataset_id, vehicle_id) and cut at the ratio boundaries, so vehicle counts
/// match the ratios to within one vehicle. Sample order within a partition
/// follows the input order.
Partitions split_dataset(std::span<const TrajectorySample> samples, SplitRatios ratios,
                         std::uint64_t seed);

}  // namespace trackcast::ingest
