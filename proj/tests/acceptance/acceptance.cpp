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

// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any gating criterion fails. Pass criterion numbers to run a subset.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "trackcast/atcn/encoder.hpp"
#include "trackcast/atcn/padding.hpp"
#include "trackcast/cli/cli.hpp"
#include "trackcast/ingest/synthetic.hpp"
#include "trackcast/ingest/window.hpp"
#include "trackcast/model/batch.hpp"
#include "trackcast/model/complexity.hpp"
#include "trackcast/model/trajectory_model.hpp"
#include "trackcast/num/batch_norm.hpp"
#include "trackcast/num/conv.hpp"
#include "trackcast/num/ops.hpp"
#include "trackcast/train/metrics.hpp"
#include "trackcast/train/trainer.hpp"

namespace {

using namespace trackcast;
namespace fs = std::filesystem;
using num::Tensor;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("trackcast_accept_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// 1. Convolution against the padded-array oracle.
Outcome conv_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  double worst = 0.0;
  std::size_t counts[3] = {0, 0, 0};
  for (int n = 0; n < 200; ++n) {
    const int kind = n % 3;  // standard, depthwise, pointwise
    const std::size_t cin = pick(1, 6);
    const std::size_t steps = pick(1, 20);
    std::size_t cout = pick(1, 6), taps = pick(1, 4), dilation = pick(1, 3), groups = 1;
    if (kind == 1) {
      cout = cin;
      groups = cin;
    } else if (kind == 2) {
      taps = 1;
      dilation = 1;
    }
    const auto mode = (n / 3) % 2 ? num::PadMode::kSymmetric : num::PadMode::kCausalLeft;
    const auto x = testing::random_values(rng, cin * steps);
    num::Kernel1D k;
    k.weights = Tensor::from({cout, cin / groups, taps}, testing::random_values(rng, cout * cin / groups * taps));
    k.bias = Tensor::from({cout}, testing::random_values(rng, cout));
    k.dilation = dilation;
    k.groups = groups;
    const auto got = num::dilated_conv1d(Tensor::from({1, cin, steps}, x), k, mode).to_vector();
    const auto want = testing::naive_conv1d(x, cin, steps, k.weights.to_vector(), k.bias.to_vector(),
                                            cout, taps, dilation, groups, mode);
    if (got.size() != want.size()) return {false, fmt("length mismatch at instance %d", n)};
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    ++counts[kind];
  }
  const double secs = seconds_since(start);
  return {worst < 1e-9 && secs < 10.0,
          fmt("200 instances (%zu standard, %zu depthwise, %zu pointwise), max abs error %.2e, %.2f s",
              counts[0], counts[1], counts[2], worst, secs)};
}

// 2. Finite-difference gradient suite.
Outcome gradients() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(7);
  std::vector<std::pair<std::string, testing::GradCheck>> results;
  auto check = [&](const std::string& name, const std::function<Tensor()>& loss,
                   const num::ParameterList& params) {
    results.emplace_back(name, testing::check_gradients(loss, params));
  };
  using testing::random_parameter;
  using testing::weighted_sum;

  for (int kind = 0; kind < 3; ++kind) {
    const std::size_t cin = 4, cout = kind == 1 ? 4 : 3, taps = kind == 2 ? 1 : 2;
    const std::size_t groups = kind == 1 ? 4 : 1;
    Tensor x = random_parameter(rng, {2, cin, 6});
    num::Kernel1D k;
    k.weights = random_parameter(rng, {cout, cin / groups, taps});
    k.bias = random_parameter(rng, {cout});
    k.dilation = kind == 0 ? 2 : 1;
    k.groups = groups;
    const char* names[] = {"conv1d standard", "conv1d depthwise", "conv1d pointwise"};
    check(names[kind], [&] { return weighted_sum(num::dilated_conv1d(x, k, num::PadMode::kCausalLeft)); },
          {{"x", x}, {"w", k.weights}, {"b", k.bias}});
  }
  {
    Tensor x = random_parameter(rng, {2, 3, 5, 3});
    Tensor w = random_parameter(rng, {2, 3, 3, 1});
    Tensor b = random_parameter(rng, {2});
    check("conv2d", [&] { return weighted_sum(num::conv2d(x, w, b, {1, 1, 0, 0})); },
          {{"x", x}, {"w", w}, {"b", b}});
    check("maxpool", [&] { return weighted_sum(num::max_pool2d(x, {2, 1, 2, 1, 1, 0})); }, {{"x", x}});
  }
  {
    Tensor x = random_parameter(rng, {3, 4});
    Tensor w = random_parameter(rng, {5, 4});
    Tensor b = random_parameter(rng, {5});
    check("dense+swish", [&] { return weighted_sum(num::swish(num::dense(x, w, b))); },
          {{"x", x}, {"w", w}, {"b", b}});
  }
  {
    Tensor x = random_parameter(rng, {4, 3, 5});
    Tensor gamma = random_parameter(rng, {3}, 0.5, 1.5);
    Tensor beta = random_parameter(rng, {3});
    num::BatchNormStats stats;
    check("batch norm (train)",
          [&] { return weighted_sum(num::batch_norm(x, gamma, beta, stats, num::Mode::kTrain)); },
          {{"x", x}, {"gamma", gamma}, {"beta", beta}});
  }
  {
    num::Initializer init(3);
    num::LstmLayer lstm(3, 4, init);
    Tensor x = random_parameter(rng, {2, 3});
    Tensor h = random_parameter(rng, {2, 4});
    Tensor c = random_parameter(rng, {2, 4});
    num::ParameterList params{{"x", x}, {"h", h}, {"c", c}};
    lstm.collect("lstm", params);
    check("lstm (2 steps)",
          [&] {
            auto [h1, c1] = num::lstm_cell(x, h, c, lstm.weights());
            auto [h2, c2] = num::lstm_cell(x, h1, c1, lstm.weights());
            return num::add(weighted_sum(h2, 1), weighted_sum(c2, 2));
          },
          params);
  }
  {
    num::Initializer init(5);
    atcn::AtcnConfig cfg;
    cfg.layer_output_channels = {4, 6, 8};
    cfg.dilations = {1, 2, 1};
    cfg.kernel_sizes = {2, 2, 2};
    atcn::AtcnEncoder enc(cfg, init);
    Tensor x = random_parameter(rng, {3, 2, 6});
    num::ParameterList params{{"x", x}};
    enc.collect("atcn", params);
    check("atcn encoder", [&] { return weighted_sum(enc.forward(x, num::Mode::kTrain)); }, params);
  }
  for (bool autoregressive : {false, true}) {
    model::ModelConfig cfg = testing::tiny_model_config();
    cfg.autoregressive = autoregressive;
    model::TrajectoryModel m(cfg, 17);
    std::vector<ingest::TrajectorySample> samples;
    for (int s = 0; s < 3; ++s) {
      auto sample = testing::line_sample(0.1 * s, 1.0 + 0.3 * s, cfg.history_steps, cfg.horizon_steps);
      for (int n = 0; n < 2 + s; ++n) {
        ingest::NeighborTrack nb;
        nb.vehicle_id = n;
        nb.cell = ingest::GridCell{n, (n + s) % 3};
        for (std::size_t t = 0; t < cfg.history_steps; ++t) {
          const auto xy = testing::random_values(rng, 2, -3.0, 3.0);
          nb.history.push_back({xy[0], xy[1]});
          nb.valid.push_back(1);
        }
        sample.neighbors.push_back(nb);
      }
      samples.push_back(sample);
    }
    // Unit-norm conv rows: same function under train-mode batch norm, better
    // conditioned differences.
    for (atcn::AtcnEncoder* enc : {&m.neighbor_encoder(), &m.ego_encoder()}) {
      for (auto& block : enc->blocks()) {
        for (auto& unit : block.units) testing::normalize_rows(unit.conv.kernel());
      }
    }
    const model::Batch batch = model::collate(samples, cfg);
    check(autoregressive ? "full model (autoregressive)" : "full model",
          [&] { return weighted_sum(m.forward(batch, num::Mode::kTrain)); }, m.parameters());
  }

  double worst = 0.0;
  std::string worst_name;
  std::size_t checked = 0;
  for (const auto& [name, r] : results) {
    checked += r.checked;
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      worst_name = name + " " + r.worst;
    }
  }
  const double secs = seconds_since(start);
  return {worst < 1e-6 && secs < 60.0,
          fmt("%zu checks, %zu values, max relative error %.2e (%s), %.1f s", results.size(), checked,
              worst, worst_name.c_str(), secs)};
}

// 3. Receptive field by perturbation, plus the padding examples.
Outcome receptive_field() {
  const atcn::AtcnConfig cfg = atcn::neighbor_encoder_config();
  num::Initializer init(11);
  atcn::AtcnEncoder enc(cfg, init);
  std::mt19937_64 rng(12);
  enc.forward(testing::random_tensor(rng, {8, 2, 16}), num::Mode::kTrain);
  const std::size_t steps = 16;
  const Tensor x = testing::random_tensor(rng, {1, 2, steps});
  const auto base = enc.encode_summary(x, num::Mode::kEval).to_vector();
  std::size_t reach = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    auto v = x.to_vector();
    v[s] += 1.0;
    v[steps + s] -= 1.0;
    const auto moved = enc.encode_summary(Tensor::from({1, 2, steps}, v), num::Mode::kEval).to_vector();
    if (moved != base) reach = std::max(reach, steps - s);
  }
  const std::size_t formula = atcn::receptive_field(cfg);
  const std::size_t p1 = atcn::required_padding(16, 16, 1, 2, 1);
  const std::size_t p2 = atcn::required_padding(16, 16, 1, 1, 1);
  const std::size_t p3 = atcn::required_padding(16, 16, 1, 2, 2);
  return {reach == 4 && formula == 4 && p1 == 1 && p2 == 0 && p3 == 1,
          fmt("empirical rf %zu, formula %zu; padding (k2,d1)=%zu (k1)=%zu (k2,d2)=%zu", reach, formula,
              p1, p2, p3)};
}

// 4. ADE convention.
Outcome ade_convention() {
  const std::array<double, 5> rmse{0.43, 1.12, 1.91, 2.87, 4.07};
  train::Trajectory truth(25, {0.0, 0.0});
  train::Trajectory pred = truth;
  for (std::size_t h = 0; h < 5; ++h) pred[train::kHorizonSteps[h] - 1] = {0.0, rmse[h]};
  std::vector<train::Trajectory> p{pred}, t{truth};
  const train::EvalReport r = train::evaluate_predictions(p, t);
  return {std::abs(r.ade - 2.08) <= 0.005, fmt("ADE %.4f (expected 2.08 +- 0.005)", r.ade)};
}

// 5. Complexity calibration through the complexity command.
Outcome complexity() {
  TempDir tmp("complexity");
  if (cli({"complexity", "--out", tmp.path.string()}) != 0) return {false, "complexity command failed"};
  std::map<std::string, std::pair<std::uint64_t, double>> totals;
  std::ifstream in(tmp.path / "complexity_totals.csv");
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string name, value, reference, deviation;
    std::getline(ss, name, ',');
    std::getline(ss, value, ',');
    std::getline(ss, reference, ',');
    std::getline(ss, deviation, ',');
    if (!deviation.empty()) totals[name] = {std::stoull(value), std::stod(deviation)};
  }
  if (!totals.count("params") || !totals.count("macs")) return {false, "totals file incomplete"};
  const bool units = model::dense_params(32, 80) == 2640 && model::conv1d_macs(64, 64, 2, 64, 16) == 2048;
  double min_saving = 1e9;
  const model::ModelConfig cfg;
  for (const auto* enc : {&cfg.neighbor_atcn, &cfg.ego_atcn}) {
    for (const auto& s : model::separable_savings(*enc, cfg.history_steps)) {
      min_saving = std::min(min_saving, s.ratio());
    }
  }
  const auto [params, pdev] = totals["params"];
  const auto [macs, mdev] = totals["macs"];
  return {std::abs(pdev) <= 10.0 && std::abs(mdev) <= 10.0 && units && min_saving >= 2.0,
          fmt("params %llu (%+.2f%% vs 171703), MACs %llu (%+.2f%% vs 1667425), unit counts %s, "
              "min separable saving %.2fx",
              static_cast<unsigned long long>(params), pdev, static_cast<unsigned long long>(macs),
              mdev, units ? "exact" : "WRONG", min_saving)};
}

std::vector<ingest::TrajectorySample> synthetic_samples(std::size_t vehicles, std::uint64_t seed,
                                                        std::size_t stride) {
  ingest::SyntheticHighway scene;
  scene.vehicles = vehicles;
  scene.frames = 180;
  scene.seed = seed;
  ingest::WindowConfig w;
  w.stride = stride;
  return ingest::window_samples(ingest::generate_highway(scene), w).samples;
}

// 6. Learning smoke test.
Outcome learning() {
  const auto start = std::chrono::steady_clock::now();
  auto train_set = synthetic_samples(50, 21, 10);
  train_set.resize(std::min<std::size_t>(train_set.size(), 500));
  const auto test_set = synthetic_samples(20, 22, 10);
  model::TrajectoryModel m(model::ModelConfig{}, 1);
  train::TrainConfig cfg;
  cfg.epochs = 10;
  const train::TrainResult r = train::train(m, train_set, {}, cfg);
  if (r.status != train::TrainStatus::kCompleted) return {false, "training diverged: " + r.message};
  const double ade = train::evaluate(m, test_set).ade;
  const double baseline = train::evaluate_constant_position(test_set).ade;
  const double secs = seconds_since(start);
  return {ade < 0.5 * baseline && secs < 300.0,
          fmt("%zu train samples, 10 epochs: held-out ADE %.3f m vs constant-position %.3f m (%.1f%%), "
              "%.0f s",
              train_set.size(), ade, baseline, 100.0 * ade / baseline, secs)};
}

// 7. Determinism of the train command.
Outcome determinism() {
  TempDir tmp("determinism");
  const std::string root = tmp.path.string();
  if (cli({"synth", "--vehicles", "24", "--frames", "100", "--out", root + "/syn"}) != 0 ||
      cli({"ingest", root + "/syn/tracks.csv", "--stride", "4", "--out", root + "/data"}) != 0) {
    return {false, "data preparation failed"};
  }
  for (const char* run : {"/a", "/b"}) {
    if (cli({"train", "--data", root + "/data", "--out", root + run, "--epochs", "2", "--seed", "9"}) != 0) {
      return {false, "train command failed"};
    }
  }
  bool same = true;
  std::size_t bytes = 0;
  for (const char* f : {"model.ckpt", "resume.ckpt", "history.csv"}) {
    const std::string a = slurp(tmp.path / "a" / f), b = slurp(tmp.path / "b" / f);
    same = same && !a.empty() && a == b;
    bytes += a.size();
  }
  return {same, fmt("two seeded runs: checkpoints and history %s (%zu bytes compared)",
                    same ? "bit-identical" : "DIFFER", bytes)};
}

// 8. Ingestion invariants.
Outcome pipeline_invariants() {
  ingest::SyntheticHighway scene;
  scene.vehicles = 30;
  scene.frames = 100;
  scene.seed = 31;
  const auto points = ingest::generate_highway(scene);
  ingest::WindowConfig w;
  w.stride = 3;
  const auto base = ingest::window_samples(points, w).samples;

  auto remap = [&](auto&& fn) {
    auto out = points;
    for (auto& p : out) {
      const double sx = static_cast<double>(p.source_x) / ingest::kTicksPerSourceUnit;
      const double sy = static_cast<double>(p.source_y) / ingest::kTicksPerSourceUnit;
      fn(p, sx, sy);
    }
    return out;
  };

  std::size_t translations = 0;
  bool translation_ok = !base.empty();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> offset(-1e5, 1e5);
  for (int k = 0; k < 5 && translation_ok; ++k) {
    const double dx = std::round(offset(rng) * 1000) / 1000, dy = std::round(offset(rng) * 1000) / 1000;
    const auto moved = remap([&](ingest::TrackPoint& p, double sx, double sy) {
      p = ingest::TrackPoint::from_source(p.vehicle_id, p.frame_id, sx + dx, sy + dy, p.lane_id);
    });
    translation_ok = ingest::window_samples(moved, w).samples == base;
    ++translations;
  }

  // Rewrite everything after (before) t0 and require features (labels) to stay put.
  std::size_t audited = 0;
  bool leakage_ok = true;
  for (std::size_t i = 0; i < base.size() && leakage_ok; i += 7) {
    const auto& s = base[i];
    for (bool future : {true, false}) {
      const auto scrambled = remap([&](ingest::TrackPoint& p, double sx, double sy) {
        if (future ? p.frame_id > s.meta.t0_frame : p.frame_id < s.meta.t0_frame) {
          p = ingest::TrackPoint::from_source(p.vehicle_id, p.frame_id, sx + 7.0, sy - 40.0, p.lane_id);
        }
      });
      const auto again = ingest::window_samples(scrambled, w).samples;
      auto it = std::find_if(again.begin(), again.end(), [&](const auto& x) { return x.meta == s.meta; });
      leakage_ok = it != again.end() &&
                   (future ? (it->ego_history == s.ego_history && it->neighbors == s.neighbors)
                           : it->future == s.future);
    }
    ++audited;
  }

  const ingest::TrackPoint ego = ingest::TrackPoint::from_source(1, 0, 6.0, 500.0, 2);
  auto row_at = [&](double dy_ft) -> int {
    auto cell = ingest::grid_assign(ego, ingest::TrackPoint::from_source(2, 0, 6.0, 500.0 + dy_ft, 2), w);
    return cell ? cell->row : -1;
  };
  const bool grid_ok = row_at(-90.0) == 0 && row_at(0.0) == 6 && row_at(100.0) == 12 &&
                       row_at(105.0) == -1 && row_at(-90.5) == -1 && row_at(20.0) == 7;

  return {translation_ok && leakage_ok && grid_ok,
          fmt("translation invariance %s (%zu offsets, %zu samples); leakage audit %s (%zu samples); "
              "grid boundaries %s",
              translation_ok ? "ok" : "FAILED", translations, base.size(), leakage_ok ? "ok" : "FAILED",
              audited, grid_ok ? "ok" : "FAILED")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "convolution oracle", conv_oracle},
      {2, "gradient suite", gradients},
      {3, "receptive field and padding", receptive_field},
      {4, "ADE convention", ade_convention},
      {5, "complexity calibration", complexity},
      {6, "learning smoke test", learning},
      {7, "determinism", determinism},
      {8, "pipeline invariants", pipeline_invariants},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail
              << std::endl;
  }
  if (only.empty() || only.count(9)) {
    std::cout << "SKIP [9] NGSIM reproduction (optional, non-gating): needs the real dataset and a "
                 "multi-hour training run"
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
