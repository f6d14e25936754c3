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

#include <cstddef>
#include <span>
#include <vector>

#include "trackcast/num/tensor.hpp"

namespace trackcast::num {

// Elementwise arithmetic. Operands must have identical shapes.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

// Reductions to a one-element tensor.
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

// Activations.
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
/// x * sigmoid(x)
Tensor swish(const Tensor& a);
/// Elementwise Huber term: 0.5 x^2 / beta for |x| < beta, |x| - 0.5 beta otherwise.
Tensor smooth_l1(const Tensor& a, double beta = 1.0);

// Structural operations.
Tensor reshape(const Tensor& a, Shape shape);
Tensor concat(std::span<const Tensor> parts, std::size_t axis);
Tensor concat(std::initializer_list<Tensor> parts, std::size_t axis);
/// Half-open range [begin, end) along `axis`.
Tensor slice(const Tensor& a, std::size_t axis, std::size_t begin, std::size_t end);
/// Single index along `axis`; the axis is removed from the result.
Tensor take(const Tensor& a, std::size_t axis, std::size_t index);

/// Fully connected layer. x is [in] or [batch x in], weights [out x in],
/// bias [out] (may be undefined).
Tensor dense(const Tensor& x, const Tensor& weights, const Tensor& bias);

/// Scatters per-agent feature rows into a spatial grid.
/// `src` is [agents x channels]; `slots[a]` is the flat cell index
/// batch * rows * cols + row * cols + col for agent a. Cells that receive no
/// agent are zero. Result shape [batch x channels x rows x cols].
/// Slots must be distinct.
Tensor scatter_grid(const Tensor& src, std::span<const std::size_t> slots, std::size_t batch,
                    std::size_t rows, std::size_t cols);

}  // namespace trackcast::num
