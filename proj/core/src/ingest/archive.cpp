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

#include "trackcast/ingest/archive.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <ostream>
#include <string_view>

#include "trackcast/errors.hpp"

namespace trackcast::ingest {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'K', 'S', 'A'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxSequence = 1u << 16;

template <typename U>
void put(std::ostream& out, U value) {
  using Raw = std::make_unsigned_t<U>;
  Raw raw = static_cast<Raw>(value);
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((raw >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get(std::istream& in) {
  using Raw = std::make_unsigned_t<U>;
  std::array<unsigned char, sizeof(U)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw InputError("sample archive truncated");
  Raw raw = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) raw |= static_cast<Raw>(bytes[i]) << (8 * i);
  return static_cast<U>(raw);
}

void put_f64(std::ostream& out, double v) { put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get<std::uint64_t>(in)); }

void put_positions(std::ostream& out, const std::vector<Position>& ps) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ps.size()));
  for (const auto& p : ps) {
    put_f64(out, p[0]);
    put_f64(out, p[1]);
  }
}

std::vector<Position> get_positions(std::istream& in) {
  auto n = get<std::uint32_t>(in);
  if (n > kMaxSequence) throw InputError("sample archive sequence length out of range");
  std::vector<Position> ps(n);
  for (auto& p : ps) {
    p[0] = get_f64(in);
    p[1] = get_f64(in);
  }
  return ps;
}

void write_binary(std::ostream& out, std::span<const TrajectorySample> samples) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, samples.size());
  for (const auto& s : samples) {
    put<std::uint32_t>(out, s.meta.dataset_id);
    put<std::int64_t>(out, s.meta.vehicle_id);
    put<std::int64_t>(out, s.meta.t0_frame);
    put_positions(out, s.ego_history);
    put_positions(out, s.future);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.neighbors.size()));
    for (const auto& n : s.neighbors) {
      put<std::int64_t>(out, n.vehicle_id);
      put<std::int32_t>(out, n.cell ? n.cell->row : -1);
      put<std::int32_t>(out, n.cell ? n.cell->col : -1);
      put_positions(out, n.history);
      for (auto v : n.valid) put<std::uint8_t>(out, v);
    }
  }
}

std::vector<TrajectorySample> read_binary(std::istream& in) {
  if (get<std::uint32_t>(in) != kVersion) throw InputError("unsupported sample archive version");
  auto count = get<std::uint64_t>(in);
  std::vector<TrajectorySample> samples;
  for (std::uint64_t k = 0; k < count; ++k) {
    TrajectorySample s;
    s.meta.dataset_id = get<std::uint32_t>(in);
    s.meta.vehicle_id = get<std::int64_t>(in);
    s.meta.t0_frame = get<std::int64_t>(in);
    s.ego_history = get_positions(in);
    s.future = get_positions(in);
    auto neighbors = get<std::uint32_t>(in);
    if (neighbors > kMaxSequence) throw InputError("sample archive neighbour count out of range");
    for (std::uint32_t j = 0; j < neighbors; ++j) {
      NeighborTrack n;
      n.vehicle_id = get<std::int64_t>(in);
      auto row = get<std::int32_t>(in);
      auto col = get<std::int32_t>(in);
      if (row >= 0) n.cell = GridCell{row, col};
      n.history = get_positions(in);
      n.valid.resize(n.history.size());
      for (auto& v : n.valid) v = get<std::uint8_t>(in);
      s.neighbors.push_back(std::move(n));
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

nlohmann::json positions_json(const std::vector<Position>& ps) {
  auto arr = nlohmann::json::array();
  for (const auto& p : ps) arr.push_back({p[0], p[1]});
  return arr;
}

std::vector<Position> positions_from_json(const nlohmann::json& arr) {
  std::vector<Position> ps;
  for (const auto& p : arr) ps.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return ps;
}

void write_text(std::ostream& out, std::span<const TrajectorySample> samples) {
  for (const auto& s : samples) {
    nlohmann::json j;
    j["dataset"] = s.meta.dataset_id;
    j["vehicle"] = s.meta.vehicle_id;
    j["t0"] = s.meta.t0_frame;
    j["ego_history"] = positions_json(s.ego_history);
    j["future"] = positions_json(s.future);
    auto ns = nlohmann::json::array();
    for (const auto& n : s.neighbors) {
      nlohmann::json nj;
      nj["vehicle"] = n.vehicle_id;
      nj["row"] = n.cell ? n.cell->row : -1;
      nj["col"] = n.cell ? n.cell->col : -1;
      nj["history"] = positions_json(n.history);
      nj["valid"] = n.valid;
      ns.push_back(std::move(nj));
    }
    j["neighbors"] = std::move(ns);
    out << j.dump() << '\n';
  }
}

std::vector<TrajectorySample> read_text(std::istream& in) {
  std::vector<TrajectorySample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      TrajectorySample s;
      s.meta.dataset_id = j.at("dataset").get<std::uint32_t>();
      s.meta.vehicle_id = j.at("vehicle").get<std::int64_t>();
      s.meta.t0_frame = j.at("t0").get<std::int64_t>();
      s.ego_history = positions_from_json(j.at("ego_history"));
      s.future = positions_from_json(j.at("future"));
      for (const auto& nj : j.at("neighbors")) {
        NeighborTrack n;
        n.vehicle_id = nj.at("vehicle").get<std::int64_t>();
        int row = nj.at("row").get<int>();
        int col = nj.at("col").get<int>();
        if (row >= 0) n.cell = GridCell{row, col};
        n.history = positions_from_json(nj.at("history"));
        n.valid = nj.at("valid").get<std::vector<std::uint8_t>>();
        s.neighbors.push_back(std::move(n));
      }
      samples.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw InputError("sample archive line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

}  // namespace

const char* to_string(ArchiveFormat format) {
  return format == ArchiveFormat::kBinary ? "binary" : "text";
}

ArchiveFormat archive_format_from_string(const std::string& text) {
  if (text == "binary") return ArchiveFormat::kBinary;
  if (text == "text") return ArchiveFormat::kText;
  throw ConfigError("unknown archive format '" + text + "'");
}

const char* archive_extension(ArchiveFormat format) {
  return format == ArchiveFormat::kBinary ? ".samples" : ".jsonl";
}

void write_archive(std::ostream& out, std::span<const TrajectorySample> samples, ArchiveFormat format) {
  if (format == ArchiveFormat::kBinary) {
    write_binary(out, samples);
  } else {
    write_text(out, samples);
  }
  if (!out) throw InputError("failed writing sample archive");
}

std::vector<TrajectorySample> read_archive(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in && magic == kMagic) return read_binary(in);
  in.clear();
  in.seekg(0);
  return read_text(in);
}

void save_archive(const std::filesystem::path& path, std::span<const TrajectorySample> samples,
                  ArchiveFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  write_archive(out, samples, format);
}

std::vector<TrajectorySample> load_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open sample archive " + path.string());
  return read_archive(in);
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t file_fingerprint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

}  // namespace trackcast::ingest
