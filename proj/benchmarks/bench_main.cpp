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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "trackcast/ingest/synthetic.hpp"
#include "trackcast/ingest/window.hpp"
#include "trackcast/model/batch.hpp"
#include "trackcast/model/complexity.hpp"
#include "trackcast/model/trajectory_model.hpp"
#include "trackcast/num/adam.hpp"
#include "trackcast/num/conv.hpp"
#include "trackcast/train/loss.hpp"

namespace {

using namespace trackcast;
using num::Tensor;

Tensor random_tensor(num::Shape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(num::shape_size(shape));
  for (double& x : v) x = dist(rng);
  return Tensor::from(std::move(shape), std::move(v));
}

// args: channels, groups (1 = standard, channels = depthwise)
void BM_DilatedConv1d(benchmark::State& state) {
  const auto ch = static_cast<std::size_t>(state.range(0));
  const auto groups = static_cast<std::size_t>(state.range(1));
  const Tensor x = random_tensor({32, ch, 16}, 1);
  num::Kernel1D k;
  k.weights = random_tensor({ch, ch / groups, 2}, 2);
  k.bias = random_tensor({ch}, 3);
  k.groups = groups;
  for (auto _ : state) {
    benchmark::DoNotOptimize(num::dilated_conv1d(x, k, num::PadMode::kCausalLeft).data().data());
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_DilatedConv1d)->Args({64, 1})->Args({64, 64})->Args({32, 1})->Args({32, 32});

std::vector<ingest::TrajectorySample> samples(std::size_t n) {
  ingest::SyntheticHighway scene;
  scene.vehicles = 40;
  scene.frames = 120;
  ingest::WindowConfig w;
  w.stride = 5;
  auto out = ingest::window_samples(ingest::generate_highway(scene), w).samples;
  out.resize(std::min(out.size(), n));
  return out;
}

void BM_ModelForwardEval(benchmark::State& state) {
  const model::ModelConfig cfg;
  model::TrajectoryModel m(cfg, 1);
  const auto data = samples(static_cast<std::size_t>(state.range(0)));
  const model::Batch batch = model::collate(data, cfg);
  m.forward(batch, num::Mode::kTrain);  // running statistics
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.forward(batch, num::Mode::kEval).data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_ModelForwardEval)->Arg(1)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  const model::ModelConfig cfg;
  model::TrajectoryModel m(cfg, 1);
  const auto data = samples(32);
  const model::Batch batch = model::collate(data, cfg);
  num::ParameterList params = m.parameters();
  num::AdamState adam;
  for (auto _ : state) {
    num::zero_grads(params);
    Tensor loss = train::trajectory_loss(m.forward(batch, num::Mode::kTrain), batch.target,
                                         train::LossKind::kMse);
    loss.backward();
    num::adam_step(params, adam);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

void BM_ComplexityReport(benchmark::State& state) {
  const model::ModelConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(model::count_complexity(cfg).total_macs);
}
BENCHMARK(BM_ComplexityReport);

void BM_WindowSamples(benchmark::State& state) {
  ingest::SyntheticHighway scene;
  scene.vehicles = 60;
  scene.frames = 200;
  const auto points = ingest::generate_highway(scene);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ingest::window_samples(points, {}).samples.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}
BENCHMARK(BM_WindowSamples)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
