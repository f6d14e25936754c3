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

#include "trackcast/num/adam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trackcast/errors.hpp"

namespace trackcast::num {

const char* to_string(ClipMode mode) {
  switch (mode) {
    case ClipMode::kGlobalNorm: return "global-norm";
    case ClipMode::kValue: return "value";
    case ClipMode::kNone: return "none";
  }
  return "global-norm";
}

ClipMode clip_mode_from_string(const std::string& text) {
  if (text == "global-norm") return ClipMode::kGlobalNorm;
  if (text == "value") return ClipMode::kValue;
  if (text == "none") return ClipMode::kNone;
  throw ConfigError("unknown clip mode '" + text + "'");
}

double global_grad_norm(const ParameterList& params) {
  double total = 0.0;
  for (const auto& p : params) {
    if (!p.tensor.has_grad()) continue;
    for (double g : p.tensor.grad()) total += g * g;
  }
  return std::sqrt(total);
}

void zero_grads(ParameterList& params) {
  for (auto& p : params) p.tensor.zero_grad();
}

AdamStepReport adam_step(ParameterList& params, AdamState& state) {
  const AdamOptions& opt = state.options;
  for (const auto& p : params) {
    if (!p.tensor.has_grad()) continue;
    auto g = p.tensor.grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!std::isfinite(g[i])) {
        std::ostringstream msg;
        msg << "non-finite gradient " << g[i] << " in '" << p.name << "' at index " << i
            << " (step " << state.step + 1 << ")";
        throw NumericError(msg.str());
      }
    }
  }
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.emplace_back(p.tensor.size(), 0.0);
      state.second_moment.emplace_back(p.tensor.size(), 0.0);
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw ConfigError("adam_step: optimizer state does not match parameter list");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (state.first_moment[k].size() != params[k].tensor.size()) {
      throw ConfigError("adam_step: moment shape mismatch for '" + params[k].name + "'");
    }
  }

  AdamStepReport report;
  report.grad_norm = global_grad_norm(params);
  if (opt.clip_mode == ClipMode::kGlobalNorm && report.grad_norm > opt.clip) {
    report.clip_scale = opt.clip / report.grad_norm;
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(opt.beta1, t);
  const double correction2 = 1.0 - std::pow(opt.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    auto value = params[k].tensor.mutable_data();
    auto grad = params[k].tensor.grad();
    for (std::size_t i = 0; i < value.size(); ++i) {
      double g = grad[i] * report.clip_scale;
      if (opt.clip_mode == ClipMode::kValue) g = std::clamp(g, -opt.clip, opt.clip);
      m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * g;
      v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      value[i] -= opt.lr * m_hat / (std::sqrt(v_hat) + opt.epsilon);
    }
  }
  return report;
}

}  // namespace trackcast::num
