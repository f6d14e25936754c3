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

#include "trackcast/num/checkpoint.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "trackcast/errors.hpp"

namespace trackcast::num {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'K', 'C', 'P'};
// Guards against corrupt length fields.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;

template <typename U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw InputError("checkpoint truncated");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_string(std::ostream& out, const std::string& s) {
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  auto n = get_le<std::uint32_t>(in);
  if (n > (1u << 20)) throw InputError("checkpoint string length out of range");
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw InputError("checkpoint truncated");
  return s;
}

}  // namespace

const TensorRecord* Checkpoint::find(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

const std::string* Checkpoint::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

void Checkpoint::set_meta(const std::string& key, std::string value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  metadata.emplace_back(key, std::move(value));
}

void write_checkpoint(std::ostream& out, const Checkpoint& cp) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, cp.version);
  put_le<std::uint64_t>(out, cp.config_hash);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cp.metadata.size()));
  for (const auto& [k, v] : cp.metadata) {
    put_string(out, k);
    put_string(out, v);
  }
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cp.records.size()));
  for (const auto& r : cp.records) {
    if (shape_size(r.shape) != r.values.size()) {
      throw ConfigError("checkpoint record '" + r.name + "' shape does not match its values");
    }
    put_string(out, r.name);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(r.shape.size()));
    for (std::size_t e : r.shape) put_le<std::uint64_t>(out, e);
    for (double v : r.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw InputError("failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw InputError("not a checkpoint file (bad magic)");
  Checkpoint cp;
  cp.version = get_le<std::uint32_t>(in);
  if (cp.version != Checkpoint::kFormatVersion) {
    throw InputError("unsupported checkpoint version " + std::to_string(cp.version));
  }
  cp.config_hash = get_le<std::uint64_t>(in);
  auto meta_count = get_le<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < meta_count; ++i) {
    std::string k = get_string(in);
    std::string v = get_string(in);
    cp.metadata.emplace_back(std::move(k), std::move(v));
  }
  auto record_count = get_le<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < record_count; ++i) {
    TensorRecord r;
    r.name = get_string(in);
    auto rank = get_le<std::uint32_t>(in);
    if (rank > 8) throw InputError("checkpoint record rank out of range");
    std::uint64_t count = 1;
    for (std::uint32_t a = 0; a < rank; ++a) {
      auto e = get_le<std::uint64_t>(in);
      if (e == 0 || e > kMaxElements) throw InputError("checkpoint record extent out of range");
      count *= e;
      if (count > kMaxElements) throw InputError("checkpoint record too large");
      r.shape.push_back(static_cast<std::size_t>(e));
    }
    r.values.resize(count);
    for (auto& v : r.values) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
    cp.records.push_back(std::move(r));
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace trackcast::num
