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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "trackcast/atcn/config.hpp"
#include "trackcast/atcn/encoder.hpp"
#include "trackcast/atcn/padding.hpp"
#include "trackcast/errors.hpp"
#include "trackcast/model/complexity.hpp"

namespace trackcast::atcn {
namespace {

using num::Mode;
using num::Tensor;

// One train-mode pass so eval mode has running statistics to use.
void warm_up(AtcnEncoder& enc, std::uint64_t seed = 77) {
  std::mt19937_64 rng(seed);
  enc.forward(testing::random_tensor(rng, {8, enc.config().input_channels, 16}), Mode::kTrain);
}

TEST(Padding, Examples) {
  EXPECT_EQ(required_padding(16, 16, 1, 2, 1), 1u);
  EXPECT_EQ(required_padding(16, 16, 1, 1, 1), 0u);
  EXPECT_EQ(required_padding(16, 16, 1, 2, 2), 1u);
  EXPECT_EQ(required_padding(16, 16, 1, 3, 1), 1u);
  EXPECT_EQ(required_padding(1, 100, 1, 2, 1), 0u);  // clamps
}

TEST(Padding, PreservesLengthAcrossGeometries) {
  for (std::size_t k = 1; k <= 5; ++k) {
    for (std::size_t d = 1; d <= 4; ++d) {
      for (std::size_t t = 1; t <= 40; ++t) {
        const std::size_t p = required_padding(t, t, 1, k, d);
        EXPECT_GE(t + 2 * p, (k - 1) * d + t) << k << " " << d << " " << t;
      }
    }
  }
}

TEST(ReceptiveField, Examples) {
  EXPECT_EQ(receptive_field(neighbor_encoder_config()), 4u);
  AtcnConfig single = neighbor_encoder_config();
  single.layer_output_channels = {4};
  single.dilations = {1};
  single.kernel_sizes = {1};
  EXPECT_EQ(receptive_field(single), 1u);
  AtcnConfig dilated = neighbor_encoder_config();
  dilated.dilations = {1, 2, 3};
  EXPECT_EQ(receptive_field(dilated), 7u);
}

TEST(Config, RejectsBadLayouts) {
  AtcnConfig c = neighbor_encoder_config();
  c.dilations.pop_back();
  EXPECT_THROW(c.validate(), ConfigError);
  c = neighbor_encoder_config();
  c.kernel_sizes[1] = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = neighbor_encoder_config();
  c.layer_output_channels.clear();
  c.dilations.clear();
  c.kernel_sizes.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(ego_encoder_config().validate());
}

TEST(Encoder, OutputShape) {
  num::Initializer init(1);
  AtcnEncoder enc(neighbor_encoder_config(), init);
  warm_up(enc);
  std::mt19937_64 rng(2);
  Tensor y = enc.forward(testing::random_tensor(rng, {2, 16}), Mode::kEval);
  EXPECT_EQ(y.shape(), (num::Shape{64, 16}));
  Tensor yb = enc.forward(testing::random_tensor(rng, {5, 2, 16}), Mode::kTrain);
  EXPECT_EQ(yb.shape(), (num::Shape{5, 64, 16}));
  EXPECT_EQ(enc.encode_summary(testing::random_tensor(rng, {5, 2, 16}), Mode::kEval).shape(),
            (num::Shape{5, 64}));
}

TEST(Encoder, LengthPreservedForAllModes) {
  num::Initializer init(3);
  std::mt19937_64 rng(4);
  for (num::PadMode mode : {num::PadMode::kCausalLeft, num::PadMode::kSymmetric}) {
    AtcnConfig c = ego_encoder_config();
    c.pad_mode = mode;
    c.kernel_sizes = {2, 3, 2};
    c.dilations = {1, 2, 1};
    AtcnEncoder enc(c, init);
    warm_up(enc);
    for (std::size_t t = 1; t <= 64; ++t) {
      EXPECT_EQ(enc.forward(testing::random_tensor(rng, {2, 2, t}), Mode::kEval).dim(2), t);
    }
  }
}

TEST(Encoder, IdentityConstructionPassesInputThrough) {
  AtcnConfig c = neighbor_encoder_config();
  c.separable_width_divisor = 1;
  c.activation = Activation::kIdentity;
  num::Initializer init(5);
  AtcnEncoder enc(c, init);
  enc.make_identity();
  std::mt19937_64 rng(6);
  Tensor x = testing::random_tensor(rng, {3, 2, 16});
  Tensor y = enc.forward(x, Mode::kEval);
  ASSERT_EQ(y.shape(), (num::Shape{3, 64, 16}));
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t ch = 0; ch < 64; ++ch) {
      for (std::size_t t = 0; t < 16; ++t) {
        const double want = ch < 2 ? x.at({b, ch, t}) : 0.0;
        ASSERT_NEAR(y.at({b, ch, t}), want, 1e-12) << b << " " << ch << " " << t;
      }
    }
  }
}

TEST(Encoder, IdentityRequiresNonShrinkingWidths) {
  num::Initializer init(5);
  AtcnEncoder enc(neighbor_encoder_config(), init);  // depthwise stage halves the width
  EXPECT_THROW(enc.make_identity(), ConfigError);
}

TEST(Encoder, RunningPairSum) {
  // One standard block, weights [1, 1] on channel 0: out[t] = x[t] + x[t-1].
  AtcnConfig c;
  c.layer_output_channels = {1};
  c.dilations = {1};
  c.kernel_sizes = {2};
  c.input_channels = 1;
  c.activation = Activation::kIdentity;
  num::Initializer init(7);
  AtcnEncoder enc(c, init);
  enc.make_identity();
  auto w = enc.blocks()[0].units[0].conv.kernel().weights.mutable_data();
  std::fill(w.begin(), w.end(), 1.0);
  Tensor y = enc.forward(Tensor::from({1, 4}, {1, 2, 3, 4}), Mode::kEval);
  const std::vector<double> want = {1, 3, 5, 7};
  for (std::size_t t = 0; t < 4; ++t) EXPECT_NEAR(y.at({0, t}), want[t], 1e-12);
}

TEST(Encoder, EmpiricalReceptiveFieldMatches) {
  num::Initializer init(8);
  AtcnEncoder enc(neighbor_encoder_config(), init);
  warm_up(enc);
  std::mt19937_64 rng(9);
  const std::size_t steps = 16;
  Tensor x = testing::random_tensor(rng, {1, 2, steps});
  const auto base = enc.encode_summary(x, Mode::kEval).to_vector();
  std::size_t reach = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    auto v = x.to_vector();
    v[s] += 0.5;
    v[steps + s] -= 0.5;
    const auto moved = enc.encode_summary(Tensor::from({1, 2, steps}, v), Mode::kEval).to_vector();
    bool changed = false;
    for (std::size_t i = 0; i < base.size(); ++i) changed |= moved[i] != base[i];
    if (changed) reach = std::max(reach, steps - s);
  }
  EXPECT_EQ(reach, receptive_field(enc.config()));
}

TEST(Encoder, SummaryIsLastColumn) {
  num::Initializer init(10);
  AtcnEncoder enc(ego_encoder_config(), init);
  warm_up(enc);
  std::mt19937_64 rng(11);
  Tensor x = testing::random_tensor(rng, {4, 2, 16});
  Tensor full = enc.forward(x, Mode::kEval);
  Tensor last = enc.encode_summary(x, Mode::kEval);
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t ch = 0; ch < 32; ++ch) {
      EXPECT_EQ(last.at({b, ch}), full.at({b, ch, 15}));
    }
  }
}

TEST(Encoder, ParameterNamesAreStable) {
  num::Initializer init(12);
  AtcnEncoder enc(ego_encoder_config(), init);
  num::ParameterList params;
  enc.collect("ego", params);
  ASSERT_FALSE(params.empty());
  EXPECT_EQ(params.front().name.rfind("ego.block0.unit0.conv", 0), 0u);
  std::size_t total = 0;
  for (const auto& p : params) total += p.tensor.size();
  std::size_t expected = 0;
  for (const auto& l : model::atcn_costs(ego_encoder_config(), 16, "ego")) expected += l.params;
  EXPECT_EQ(total, expected);
}

TEST(Cost, SeparableBlocksCheaperThanStandard) {
  for (const AtcnConfig& c : {neighbor_encoder_config(), ego_encoder_config()}) {
    const auto savings = model::separable_savings(c, 16);
    ASSERT_EQ(savings.size(), c.layers() - 1);
    for (const auto& s : savings) {
      EXPECT_LT(s.separable_macs, s.standard_macs) << "block " << s.block;
      EXPECT_GT(s.ratio(), 2.0);
    }
  }
}

}  // namespace
}  // namespace trackcast::atcn
