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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trackcast/ingest/sample.hpp"

namespace trackcast::ingest {

enum class ArchiveFormat {
  kBinary,  ///< "TKSA" container, see write_archive
  kText,    ///< one JSON object per line
};

const char* to_string(ArchiveFormat format);
ArchiveFormat archive_format_from_string(const std::string& text);
/// ".samples" for binary, ".jsonl" for text.
const char* archive_extension(ArchiveFormat format);

/// Binary layout (little-endian):
///   char[4] "TKSA", u32 version, u64 sample count, then per sample:
///   u32 dataset_id, i64 vehicle_id, i64 t0_frame,
///   u32 n + n*(f64 x, f64 y)   ego history
///   u32 n + n*(f64 x, f64 y)   future
///   u32 neighbour count, per neighbour:
///     i64 vehicle_id, i32 row, i32 col (row = -1 when outside the grid),
///     u32 n + n*(f64 x, f64 y), n*u8 valid
///
/// Text layout: one object per line with keys dataset, vehicle, t0,
/// ego_history, future, neighbors[{vehicle, row, col, history, valid}];
/// positions are [x, y] pairs.
void write_archive(std::ostream& out, std::span<const TrajectorySample> samples, ArchiveFormat format);
std::vector<TrajectorySample> read_archive(std::istream& in);

void save_archive(const std::filesystem::path& path, std::span<const TrajectorySample> samples,
                  ArchiveFormat format);
/// Format detected from content.
std::vector<TrajectorySample> load_archive(const std::filesystem::path& path);

/// FNV-1a 64 over a file's bytes.
std::uint64_t file_fingerprint(const std::filesystem::path& path);
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace trackcast::ingest
