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

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "trackcast/errors.hpp"
#include "trackcast/num/conv.hpp"

namespace trackcast::num {
namespace {

Kernel1D kernel(std::size_t out, std::size_t in_per_group, std::vector<double> w,
                std::size_t dilation = 1, std::size_t groups = 1) {
  const std::size_t taps = w.size() / (out * in_per_group);
  Kernel1D k;
  k.weights = Tensor::from({out, in_per_group, taps}, std::move(w));
  k.dilation = dilation;
  k.groups = groups;
  return k;
}

TEST(DilatedConv, RunningPairSum) {
  Tensor x = Tensor::from({1, 4}, {1, 2, 3, 4});
  EXPECT_EQ(dilated_conv1d(x, kernel(1, 1, {1, 1}), PadMode::kCausalLeft).to_vector(),
            (std::vector<double>{1, 3, 5, 7}));
}

TEST(DilatedConv, DilationTwo) {
  Tensor x = Tensor::from({1, 4}, {1, 2, 3, 4});
  EXPECT_EQ(dilated_conv1d(x, kernel(1, 1, {1, 1}, 2), PadMode::kCausalLeft).to_vector(),
            (std::vector<double>{1, 2, 4, 6}));
}

TEST(DilatedConv, SingleTapIdentity) {
  Tensor x = Tensor::from({1, 5}, {3, -1, 4, 1, -5});
  for (PadMode mode : {PadMode::kCausalLeft, PadMode::kSymmetric}) {
    EXPECT_EQ(dilated_conv1d(x, kernel(1, 1, {1}), mode).to_vector(), x.to_vector());
  }
}

TEST(DilatedConv, SymmetricModeCropsToInputLength) {
  Tensor x = Tensor::from({1, 4}, {1, 2, 3, 4});
  // k = 2, d = 1: p = 1 per side equals the causal span, so after cropping the
  // surplus step the result coincides with causal-left.
  EXPECT_EQ(dilated_conv1d(x, kernel(1, 1, {1, 1}), PadMode::kSymmetric).to_vector(),
            (std::vector<double>{1, 3, 5, 7}));
  // k = 3, d = 1: padded [0 1 2 3 4 0]; output s sums padded s .. s+2.
  EXPECT_EQ(dilated_conv1d(x, kernel(1, 1, {1, 1, 1}), PadMode::kSymmetric).to_vector(),
            (std::vector<double>{3, 6, 9, 7}));
  EXPECT_EQ(symmetric_padding(2, 1), 1u);
  EXPECT_EQ(symmetric_padding(3, 2), 2u);
}

TEST(DilatedConv, ChannelMismatchIsConfigError) {
  EXPECT_THROW(dilated_conv1d(Tensor::zeros({3, 4}), kernel(1, 2, {1, 1, 1, 1}),
                              PadMode::kCausalLeft),
               ConfigError);
}

TEST(Depthwise, DelayKernelShiftsEachChannel) {
  Tensor x = Tensor::from({2, 4}, {1, 2, 3, 4, 10, 20, 30, 40});
  Kernel1D k = kernel(2, 1, {0, 1, 0, 1}, 1, 2);
  EXPECT_EQ(depthwise_conv1d(x, k).to_vector(), (std::vector<double>{0, 1, 2, 3, 0, 10, 20, 30}));
  Kernel1D current = kernel(2, 1, {1, 0, 1, 0}, 1, 2);
  EXPECT_EQ(depthwise_conv1d(x, current).to_vector(), x.to_vector());
}

TEST(Depthwise, RejectsNonDepthwiseGrouping) {
  EXPECT_THROW(depthwise_conv1d(Tensor::zeros({2, 4}), kernel(2, 2, {1, 1, 1, 1, 1, 1, 1, 1})),
               ConfigError);
}

TEST(Pointwise, IdentityMixLeavesInputUnchanged) {
  Tensor x = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(pointwise_conv1d(x, kernel(2, 2, {1, 0, 0, 1})).to_vector(), x.to_vector());
}

TEST(Pointwise, DotProductPlusBias) {
  Kernel1D k = kernel(1, 2, {2, 3});
  k.bias = Tensor::from({1}, {1});
  EXPECT_EQ(pointwise_conv1d(Tensor::from({2, 1}, {1, 1}), k).item(), 6.0);
  EXPECT_THROW(pointwise_conv1d(Tensor::zeros({2, 3}), kernel(1, 2, {1, 1, 1, 1})), ConfigError);
}

TEST(Pointwise, AgreesWithDilatedConv) {
  std::mt19937_64 rng(11);
  Tensor x = testing::random_tensor(rng, {3, 4, 7});
  Kernel1D k = kernel(5, 4, testing::random_values(rng, 20));
  k.bias = testing::random_tensor(rng, {5});
  EXPECT_EQ(pointwise_conv1d(x, k).to_vector(),
            dilated_conv1d(x, k, PadMode::kCausalLeft).to_vector());
}

TEST(DilatedConv, MatchesNaiveOracleOn200Instances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> steps_dist(1, 20);
  std::uniform_int_distribution<std::size_t> tap_dist(1, 4);
  std::uniform_int_distribution<std::size_t> dil_dist(1, 3);
  std::uniform_int_distribution<int> kind_dist(0, 2);
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const int kind = kind_dist(rng);  // 0 standard, 1 depthwise, 2 pointwise
    const std::size_t steps = steps_dist(rng);
    std::size_t taps = tap_dist(rng);
    std::size_t dilation = dil_dist(rng);
    std::size_t cin = 1 + rng() % 4;
    std::size_t cout = 1 + rng() % 4;
    std::size_t groups = 1;
    if (kind == 1) {
      cout = cin;
      groups = cin;
    } else if (kind == 2) {
      taps = 1;
      dilation = 1;
    }
    const PadMode mode = (rng() & 1) ? PadMode::kCausalLeft : PadMode::kSymmetric;
    auto xv = testing::random_values(rng, cin * steps);
    auto wv = testing::random_values(rng, cout * (cin / groups) * taps);
    auto bv = testing::random_values(rng, cout);
    Kernel1D k;
    k.weights = Tensor::from({cout, cin / groups, taps}, wv);
    k.bias = Tensor::from({cout}, bv);
    k.dilation = dilation;
    k.groups = groups;
    Tensor x = Tensor::from({cin, steps}, xv);
    Tensor y = kind == 1   ? depthwise_conv1d(x, k, mode)
               : kind == 2 ? pointwise_conv1d(x, k)
                           : dilated_conv1d(x, k, mode);
    auto expect = testing::naive_conv1d(xv, cin, steps, wv, bv, cout, taps, dilation, groups,
                                        kind == 2 ? PadMode::kCausalLeft : mode);
    ASSERT_EQ(y.size(), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      worst = std::max(worst, std::abs(y.data()[i] - expect[i]));
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(DilatedConv, CausalOutputIgnoresFutureInputs) {
  std::mt19937_64 rng(5);
  Kernel1D k = kernel(2, 3, testing::random_values(rng, 2 * 3 * 3), 2);
  k.bias = testing::random_tensor(rng, {2});
  for (std::size_t t = 0; t < 12; ++t) {
    auto xv = testing::random_values(rng, 3 * 12);
    Tensor base = dilated_conv1d(Tensor::from({3, 12}, xv), k, PadMode::kCausalLeft);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t later = t + 1; later < 12; ++later) xv[c * 12 + later] += 100.0;
    Tensor moved = dilated_conv1d(Tensor::from({3, 12}, xv), k, PadMode::kCausalLeft);
    for (std::size_t o = 0; o < 2; ++o)
      for (std::size_t s = 0; s <= t; ++s) EXPECT_EQ(base.at({o, s}), moved.at({o, s}));
  }
}

TEST(DilatedConv, BatchedEqualsPerSample) {
  std::mt19937_64 rng(8);
  Kernel1D k = kernel(3, 2, testing::random_values(rng, 12), 1);
  Tensor xb = testing::random_tensor(rng, {4, 2, 6});
  Tensor yb = dilated_conv1d(xb, k, PadMode::kCausalLeft);
  for (std::size_t b = 0; b < 4; ++b) {
    std::vector<double> xs(xb.data().begin() + b * 12, xb.data().begin() + (b + 1) * 12);
    Tensor ys = dilated_conv1d(Tensor::from({2, 6}, xs), k, PadMode::kCausalLeft);
    for (std::size_t i = 0; i < 18; ++i) EXPECT_EQ(yb.data()[b * 18 + i], ys.data()[i]);
  }
}

TEST(Conv2d, OnesWindowSums) {
  Tensor y = conv2d(Tensor::filled({1, 3, 3}, 1.0), Tensor::filled({1, 1, 3, 3}, 1.0), Tensor{}, {});
  ASSERT_EQ(y.size(), 1u);
  EXPECT_EQ(y.item(), 9.0);
  Tensor z = conv2d(Tensor::filled({1, 4, 4}, 1.0), Tensor::filled({1, 1, 2, 2}, 1.0), Tensor{},
                    {2, 2, 0, 0});
  EXPECT_EQ(z.shape(), (Shape{1, 2, 2}));
  EXPECT_EQ(z.to_vector(), (std::vector<double>{4, 4, 4, 4}));
}

TEST(Conv2d, UnitFilterIsIdentity) {
  std::mt19937_64 rng(1);
  Tensor x = testing::random_tensor(rng, {1, 3, 4});
  EXPECT_EQ(conv2d(x, Tensor::filled({1, 1, 1, 1}, 1.0), Tensor{}, {}).to_vector(), x.to_vector());
}

TEST(Conv2d, KernelLargerThanInputIsConfigError) {
  EXPECT_THROW(conv2d(Tensor::zeros({1, 2, 2}), Tensor::zeros({1, 1, 3, 3}), Tensor{}, {}),
               ConfigError);
  EXPECT_EQ(pooled_extent(13, 3, 1, 0), 11u);
  EXPECT_EQ(pooled_extent(9, 2, 2, 1), 5u);
}

}  // namespace
}  // namespace trackcast::num
