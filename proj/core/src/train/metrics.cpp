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

#include "trackcast/train/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "trackcast/errors.hpp"

namespace trackcast::train {

EvalReport evaluate_predictions(std::span<const Trajectory> predictions,
                                std::span<const Trajectory> truths) {
  if (predictions.empty() || predictions.size() != truths.size()) {
    throw ConfigError("evaluate: need equally many (non-zero) predictions and truths");
  }
  std::array<double, 5> squared{};
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const Trajectory& p = predictions[i];
    const Trajectory& q = truths[i];
    if (p.size() < kHorizonSteps.back() || q.size() < kHorizonSteps.back()) {
      throw ConfigError("evaluate: trajectories must cover " +
                        std::to_string(kHorizonSteps.back()) + " steps");
    }
    for (std::size_t h = 0; h < kHorizonSteps.size(); ++h) {
      const std::size_t t = kHorizonSteps[h] - 1;
      const double dx = p[t][0] - q[t][0];
      const double dy = p[t][1] - q[t][1];
      squared[h] += dx * dx + dy * dy;
    }
  }
  EvalReport report;
  report.samples = predictions.size();
  for (std::size_t h = 0; h < squared.size(); ++h) {
    report.rmse[h] = std::sqrt(squared[h] / static_cast<double>(report.samples));
    report.ade += report.rmse[h];
  }
  report.ade /= static_cast<double>(report.rmse.size());
  return report;
}

EvalReport evaluate(model::TrajectoryModel& model, std::span<const ingest::TrajectorySample> samples,
                    std::size_t batch_size) {
  if (samples.empty()) throw ConfigError("evaluate: no samples");
  batch_size = std::max<std::size_t>(1, batch_size);
  const std::size_t horizon = model.config().horizon_steps;
  std::vector<Trajectory> predictions;
  std::vector<Trajectory> truths;
  predictions.reserve(samples.size());
  for (std::size_t start = 0; start < samples.size(); start += batch_size) {
    const auto chunk = samples.subspan(start, std::min(batch_size, samples.size() - start));
    num::Tensor y = model.forward(model::collate(chunk, model.config(), false), num::Mode::kEval);
    auto data = y.data();
    for (std::size_t s = 0; s < chunk.size(); ++s) {
      Trajectory p(horizon);
      for (std::size_t t = 0; t < horizon; ++t) {
        p[t] = {data[(s * horizon + t) * 2], data[(s * horizon + t) * 2 + 1]};
      }
      predictions.push_back(std::move(p));
      truths.push_back(chunk[s].future);
    }
  }
  return evaluate_predictions(predictions, truths);
}

EvalReport evaluate_constant_position(std::span<const ingest::TrajectorySample> samples) {
  std::vector<Trajectory> predictions;
  std::vector<Trajectory> truths;
  for (const auto& s : samples) {
    predictions.emplace_back(s.future.size(), ingest::Position{0.0, 0.0});
    truths.push_back(s.future);
  }
  return evaluate_predictions(predictions, truths);
}

}  // namespace trackcast::train
