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
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "trackcast/errors.hpp"
#include "trackcast/num/batch_norm.hpp"
#include "trackcast/num/conv.hpp"
#include "trackcast/num/ops.hpp"

namespace trackcast::num {
namespace {

TEST(Tensor, ShapeAndStorageAgree) {
  Tensor t = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.rank(), 2u);
  EXPECT_DOUBLE_EQ(t.at({1, 2}), 6.0);
  EXPECT_THROW(Tensor::from({2, 2}, {1, 2, 3}), ConfigError);
}

TEST(Tensor, DetachedTensorNeverAccumulatesGradient) {
  Tensor w = Tensor::parameter({2}, {1.0, 2.0});
  Tensor d = w.detach();
  EXPECT_FALSE(d.requires_grad());
  Tensor loss = sum(mul(d, d));
  EXPECT_THROW(loss.backward(), UsageError);
  EXPECT_FALSE(w.has_grad());
}

TEST(Tensor, BackwardRequiresScalar) {
  Tensor w = Tensor::parameter({2}, {1.0, 2.0});
  EXPECT_THROW(scale(w, 2.0).backward(), UsageError);
}

TEST(Backward, SumOfMatrixVectorProductGivesReplicatedInput) {
  // loss = sum(W x): dloss/dW[o][i] = x[i] for every row o.
  Tensor w = Tensor::parameter({3, 2}, {1, 2, 3, 4, 5, 6});
  Tensor x = Tensor::from({2}, {0.5, -2.0});
  sum(dense(x, w, Tensor{})).backward();
  const std::vector<double> expected{0.5, -2.0, 0.5, -2.0, 0.5, -2.0};
  EXPECT_EQ(w.grad(), expected);
}

TEST(Backward, UnusedParameterHasZeroGradient) {
  Tensor a = Tensor::parameter({2}, {1.0, 2.0});
  Tensor b = Tensor::parameter({2}, {3.0, 4.0});
  sum(mul(a, a)).backward();
  for (double g : b.grad()) EXPECT_EQ(g, 0.0);
}

TEST(Backward, GradientsAccumulateAcrossReuse) {
  Tensor a = Tensor::parameter({1}, {3.0});
  sum(add(mul(a, a), a)).backward();  // d/da (a^2 + a) = 2a + 1
  EXPECT_DOUBLE_EQ(a.grad()[0], 7.0);
}

TEST(Dense, IdentityWeightsLeaveInputUnchanged) {
  Tensor x = Tensor::from({3}, {1.5, -2.0, 4.0});
  Tensor w = Tensor::from({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  Tensor b = Tensor::zeros({3});
  EXPECT_EQ(dense(x, w, b).to_vector(), x.to_vector());
}

TEST(Dense, ShapeMismatchIsConfigError) {
  EXPECT_THROW(dense(Tensor::zeros({3}), Tensor::zeros({2, 4}), Tensor{}), ConfigError);
}

TEST(MaxPool, TwoByTwoWindowPicksMaximum) {
  Tensor x = Tensor::from({1, 2, 2}, {1, 2, 3, 4});
  Tensor y = max_pool2d(x, {2, 2, 2, 2, 0, 0});
  ASSERT_EQ(y.size(), 1u);
  EXPECT_EQ(y.item(), 4.0);
}

TEST(MaxPool, PaddedCellsNeverWin) {
  Tensor x = Tensor::from({1, 3, 1}, {-5, -7, -1});
  Tensor y = max_pool2d(x, {2, 1, 2, 1, 1, 0});
  EXPECT_EQ(y.to_vector(), (std::vector<double>{-5, -1}));
}

TEST(Concat, PreservesOrder) {
  Tensor a = Tensor::from({3}, {1, 2, 3});
  Tensor b = Tensor::from({5}, {4, 5, 6, 7, 8});
  Tensor c = concat({a, b}, 0);
  EXPECT_EQ(c.shape(), Shape{8});
  EXPECT_EQ(c.to_vector(), (std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_THROW(concat({Tensor::zeros({2, 2}), Tensor::zeros({3, 3})}, 0), ConfigError);
}

TEST(SliceTake, SelectAlongAxis) {
  Tensor x = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(slice(x, 1, 1, 3).to_vector(), (std::vector<double>{2, 3, 5, 6}));
  EXPECT_EQ(take(x, 1, 2).to_vector(), (std::vector<double>{3, 6}));
  EXPECT_THROW(slice(x, 1, 2, 4), ConfigError);
}

TEST(Swish, Examples) {
  EXPECT_EQ(swish(Tensor::scalar(0.0)).item(), 0.0);
  EXPECT_NEAR(swish(Tensor::scalar(1.0)).item(), 0.731059, 1e-6);
}

TEST(Swish, BoundedBelow) {
  std::vector<double> xs;
  for (int i = -4000; i <= 4000; ++i) xs.push_back(i * 0.005);
  Tensor y = swish(Tensor::from({xs.size()}, xs));
  double lo = 0.0;
  for (double v : y.data()) lo = std::min(lo, v);
  EXPECT_NEAR(lo, -0.2785, 1e-4);
  EXPECT_GE(lo, -0.27847);
}

TEST(SmoothL1, QuadraticThenLinear) {
  Tensor y = smooth_l1(Tensor::from({3}, {0.5, -2.0, 1.0}), 1.0);
  EXPECT_EQ(y.to_vector(), (std::vector<double>{0.125, 1.5, 0.5}));
}

TEST(ScatterGrid, PlacesRowsAndZeroFillsTheRest) {
  Tensor src = Tensor::from({2, 2}, {1, 2, 3, 4});
  const std::vector<std::size_t> slots{5, 0};  // cells (1, 2) and (0, 0) of a 2x3 grid
  Tensor g = scatter_grid(src, slots, 1, 2, 3);
  EXPECT_EQ(g.shape(), (Shape{1, 2, 2, 3}));
  EXPECT_EQ(g.at({0, 0, 1, 2}), 1.0);
  EXPECT_EQ(g.at({0, 1, 1, 2}), 2.0);
  EXPECT_EQ(g.at({0, 0, 0, 0}), 3.0);
  EXPECT_EQ(g.at({0, 1, 0, 0}), 4.0);
  EXPECT_EQ(g.at({0, 0, 0, 1}), 0.0);
  const std::vector<std::size_t> clash{1, 1};
  EXPECT_THROW(scatter_grid(src, clash, 1, 2, 3), ConfigError);
}

TEST(BatchNorm, ZeroMeanUnitVarianceBatchIsUnchanged) {
  // Biased variance of {-1, 1} is 1.
  Tensor x = Tensor::from({2, 1}, {-1.0, 1.0});
  BatchNormStats stats;
  Tensor y = batch_norm(x, Tensor::filled({1}, 1.0), Tensor::zeros({1}), stats, Mode::kTrain);
  EXPECT_NEAR(y.data()[0], -1.0, 1e-5);
  EXPECT_NEAR(y.data()[1], 1.0, 1e-5);
}

TEST(BatchNorm, PairNormalizesToMinusOnePlusOne) {
  Tensor x = Tensor::from({2, 1}, {1.0, 3.0});
  BatchNormStats stats;
  Tensor y = batch_norm(x, Tensor::filled({1}, 1.0), Tensor::zeros({1}), stats, Mode::kTrain,
                        {0.1, 0.0});
  EXPECT_EQ(y.to_vector(), (std::vector<double>{-1.0, 1.0}));
  // Running stats: 0.9 * 0 + 0.1 * 2 and 0.9 * 1 + 0.1 * 2 (unbiased variance of {1, 3}).
  EXPECT_DOUBLE_EQ(stats.mean[0], 0.2);
  EXPECT_DOUBLE_EQ(stats.var[0], 0.9 + 0.1 * 2.0);
}

TEST(BatchNorm, ZeroGammaLeavesBeta) {
  Tensor x = Tensor::from({3, 2}, {1, 5, 2, -3, 7, 0.5});
  BatchNormStats stats;
  Tensor y = batch_norm(x, Tensor::zeros({2}), Tensor::from({2}, {0.25, -4.0}), stats, Mode::kTrain);
  EXPECT_EQ(y.to_vector(), (std::vector<double>{0.25, -4, 0.25, -4, 0.25, -4}));
}

TEST(BatchNorm, EvalBeforeStatsIsConfigError) {
  BatchNormStats stats;
  EXPECT_THROW(batch_norm(Tensor::zeros({2, 1}), Tensor::filled({1}, 1.0), Tensor::zeros({1}),
                          stats, Mode::kEval),
               ConfigError);
}

TEST(BatchNorm, EvalIsPureFunctionOfStats) {
  std::mt19937_64 rng(3);
  BatchNormStats stats{{0.5, -1.0}, {2.0, 0.25}};
  Tensor x = testing::random_tensor(rng, {4, 2, 5});
  Tensor g = Tensor::from({2}, {1.5, 0.5});
  Tensor b = Tensor::from({2}, {0.1, 0.2});
  Tensor y1 = batch_norm(x, g, b, stats, Mode::kEval);
  Tensor y2 = batch_norm(x, g, b, stats, Mode::kEval);
  EXPECT_EQ(y1.to_vector(), y2.to_vector());
  EXPECT_EQ(stats.mean, (std::vector<double>{0.5, -1.0}));
  const double expect = (x.at({0, 1, 0}) + 1.0) / std::sqrt(0.25 + 1e-5) * 0.5 + 0.2;
  EXPECT_DOUBLE_EQ(y1.at({0, 1, 0}), expect);
}

}  // namespace
}  // namespace trackcast::num
