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
#include <string>
#include <utility>
#include <vector>

#include "trackcast/num/tensor.hpp"

namespace trackcast::num {

/// Binary weight container.
///
/// Layout (all integers little-endian, doubles as little-endian IEEE-754):
///   char[4]  magic "TKCP"
///   u32      format version
///   u64      configuration hash
///   u32      metadata count, then per entry: u32 length + bytes (key),
///            u32 length + bytes (value)
///   u32      record count, then per record: u32 length + bytes (name),
///            u32 rank, u64 extent * rank, f64 value * product(extents)
struct TensorRecord {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

struct Checkpoint {
  static constexpr std::uint32_t kFormatVersion = 1;

  std::uint32_t version = kFormatVersion;
  std::uint64_t config_hash = 0;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<TensorRecord> records;

  const TensorRecord* find(const std::string& name) const;
  const std::string* meta(const std::string& key) const;
  void set_meta(const std::string& key, std::string value);
};

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace trackcast::num
