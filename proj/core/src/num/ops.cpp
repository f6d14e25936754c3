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

#include "trackcast/num/ops.hpp"

#include <cmath>
#include <unordered_set>

#include "trackcast/errors.hpp"

namespace trackcast::num {

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ConfigError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                      shape_string(b.shape()));
  }
}

double sigmoid_scalar(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// Elementwise unary op with derivative expressed through input x and output y.
template <typename F, typename D>
Tensor unary(const Tensor& a, F f, D df) {
  auto in = a.data();
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
  return make_result(a.shape(), std::move(out), {a}, [a, df](Node& self) mutable {
    if (!a.requires_grad()) return;
    auto g = a.mutable_grad();
    auto x = a.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * df(x[i], self.value[i]);
  });
}

// Splits a shape around `axis` into (outer, extent, inner) strides.
struct AxisView {
  std::size_t outer = 1;
  std::size_t extent = 1;
  std::size_t inner = 1;
};

AxisView axis_view(const Shape& shape, std::size_t axis) {
  if (axis >= shape.size()) throw ConfigError("axis out of range for " + shape_string(shape));
  AxisView v;
  for (std::size_t i = 0; i < axis; ++i) v.outer *= shape[i];
  v.extent = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) v.inner *= shape[i];
  return v;
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  auto x = a.data();
  auto y = b.data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return make_result(a.shape(), std::move(out), {a, b}, [a, b](Node& self) mutable {
    for (const Tensor* t : {&a, &b}) {
      if (!t->requires_grad()) continue;
      auto g = t->mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  auto x = a.data();
  auto y = b.data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return make_result(a.shape(), std::move(out), {a, b}, [a, b](Node& self) mutable {
    if (a.requires_grad()) {
      auto g = a.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
    if (b.requires_grad()) {
      auto g = b.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  auto x = a.data();
  auto y = b.data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return make_result(a.shape(), std::move(out), {a, b}, [a, b](Node& self) mutable {
    if (a.requires_grad()) {
      auto g = a.mutable_grad();
      auto y = b.data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * y[i];
    }
    if (b.requires_grad()) {
      auto g = b.mutable_grad();
      auto x = a.data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * x[i];
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(
      a, [factor](double x) { return x * factor; },
      [factor](double, double) { return factor; });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.data()) total += v;
  return make_result({1}, {total}, {a}, [a](Node& self) mutable {
    if (!a.requires_grad()) return;
    for (double& g : a.mutable_grad()) g += self.grad[0];
  });
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.size())); }

Tensor sigmoid(const Tensor& a) {
  return unary(a, sigmoid_scalar, [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  return unary(
      a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor swish(const Tensor& a) {
  return unary(
      a, [](double x) { return x * sigmoid_scalar(x); },
      [](double x, double y) {
        double s = sigmoid_scalar(x);
        return s + y * (1.0 - s);
      });
}

Tensor smooth_l1(const Tensor& a, double beta) {
  if (!(beta > 0)) throw ConfigError("smooth_l1: beta must be positive");
  return unary(
      a,
      [beta](double x) {
        double ax = std::abs(x);
        return ax < beta ? 0.5 * x * x / beta : ax - 0.5 * beta;
      },
      [beta](double x, double) {
        if (std::abs(x) < beta) return x / beta;
        return x > 0 ? 1.0 : -1.0;
      });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_size(shape) != a.size()) {
    throw ConfigError("reshape " + shape_string(a.shape()) + " -> " + shape_string(shape));
  }
  return make_result(std::move(shape), a.to_vector(), {a}, [a](Node& self) mutable {
    if (!a.requires_grad()) return;
    auto g = a.mutable_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

Tensor concat(std::initializer_list<Tensor> parts, std::size_t axis) {
  std::vector<Tensor> v(parts);
  return concat(std::span<const Tensor>(v), axis);
}

Tensor concat(std::span<const Tensor> parts, std::size_t axis) {
  if (parts.empty()) throw ConfigError("concat of zero tensors");
  const Shape& first = parts[0].shape();
  if (axis >= first.size()) throw ConfigError("concat axis out of range");
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const Tensor& p : parts) {
    if (p.rank() != first.size()) throw ConfigError("concat rank mismatch");
    for (std::size_t i = 0; i < first.size(); ++i) {
      if (i != axis && p.shape()[i] != first[i]) {
        throw ConfigError("concat shape mismatch " + shape_string(first) + " vs " +
                          shape_string(p.shape()));
      }
    }
    out_shape[axis] += p.shape()[axis];
  }
  AxisView ov = axis_view(out_shape, axis);
  std::vector<double> out(shape_size(out_shape));
  std::size_t offset = 0;
  std::vector<std::size_t> offsets;
  for (const Tensor& p : parts) {
    offsets.push_back(offset);
    std::size_t ext = p.shape()[axis];
    auto src = p.data();
    for (std::size_t o = 0; o < ov.outer; ++o) {
      for (std::size_t e = 0; e < ext; ++e) {
        const double* from = &src[(o * ext + e) * ov.inner];
        double* to = &out[(o * ov.extent + offset + e) * ov.inner];
        std::copy(from, from + ov.inner, to);
      }
    }
    offset += ext;
  }
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  return make_result(out_shape, std::move(out), inputs,
                     [inputs, offsets, ov, axis](Node& self) mutable {
                       for (std::size_t k = 0; k < inputs.size(); ++k) {
                         Tensor& p = inputs[k];
                         if (!p.requires_grad()) continue;
                         std::size_t ext = p.shape()[axis];
                         auto g = p.mutable_grad();
                         for (std::size_t o = 0; o < ov.outer; ++o) {
                           for (std::size_t e = 0; e < ext; ++e) {
                             const double* from =
                                 &self.grad[(o * ov.extent + offsets[k] + e) * ov.inner];
                             double* to = &g[(o * ext + e) * ov.inner];
                             for (std::size_t i = 0; i < ov.inner; ++i) to[i] += from[i];
                           }
                         }
                       }
                     });
}

Tensor slice(const Tensor& a, std::size_t axis, std::size_t begin, std::size_t end) {
  AxisView v = axis_view(a.shape(), axis);
  if (begin >= end || end > v.extent) {
    throw ConfigError("slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                      ") out of range for " + shape_string(a.shape()));
  }
  Shape out_shape = a.shape();
  std::size_t ext = end - begin;
  out_shape[axis] = ext;
  std::vector<double> out(shape_size(out_shape));
  auto src = a.data();
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t e = 0; e < ext; ++e) {
      const double* from = &src[(o * v.extent + begin + e) * v.inner];
      std::copy(from, from + v.inner, &out[(o * ext + e) * v.inner]);
    }
  }
  return make_result(std::move(out_shape), std::move(out), {a},
                     [a, v, begin, ext](Node& self) mutable {
                       if (!a.requires_grad()) return;
                       auto g = a.mutable_grad();
                       for (std::size_t o = 0; o < v.outer; ++o) {
                         for (std::size_t e = 0; e < ext; ++e) {
                           double* to = &g[(o * v.extent + begin + e) * v.inner];
                           const double* from = &self.grad[(o * ext + e) * v.inner];
                           for (std::size_t i = 0; i < v.inner; ++i) to[i] += from[i];
                         }
                       }
                     });
}

Tensor take(const Tensor& a, std::size_t axis, std::size_t index) {
  Tensor s = slice(a, axis, index, index + 1);
  Shape shape = a.shape();
  shape.erase(shape.begin() + static_cast<std::ptrdiff_t>(axis));
  if (shape.empty()) shape.push_back(1);
  return reshape(s, std::move(shape));
}

Tensor dense(const Tensor& x, const Tensor& weights, const Tensor& bias) {
  if (weights.rank() != 2) throw ConfigError("dense: weights must be [out x in]");
  const std::size_t out_dim = weights.dim(0);
  const std::size_t in_dim = weights.dim(1);
  const bool batched = x.rank() == 2;
  if (!(x.rank() == 1 || batched) || x.shape().back() != in_dim) {
    throw ConfigError("dense: input " + shape_string(x.shape()) + " incompatible with weights " +
                      shape_string(weights.shape()));
  }
  if (bias.defined() && bias.shape() != Shape{out_dim}) {
    throw ConfigError("dense: bias shape " + shape_string(bias.shape()));
  }
  const std::size_t batch = batched ? x.dim(0) : 1;
  auto xv = x.data();
  auto wv = weights.data();
  std::vector<double> out(batch * out_dim);
  for (std::size_t b = 0; b < batch; ++b) {
    const double* xr = &xv[b * in_dim];
    for (std::size_t o = 0; o < out_dim; ++o) {
      const double* wr = &wv[o * in_dim];
      double acc = bias.defined() ? bias.data()[o] : 0.0;
      for (std::size_t i = 0; i < in_dim; ++i) acc += wr[i] * xr[i];
      out[b * out_dim + o] = acc;
    }
  }
  Shape out_shape = batched ? Shape{batch, out_dim} : Shape{out_dim};
  std::vector<Tensor> inputs{x, weights};
  if (bias.defined()) inputs.push_back(bias);
  return make_result(
      std::move(out_shape), std::move(out), inputs,
      [x, weights, bias, batch, in_dim, out_dim](Node& self) mutable {
        const auto& gy = self.grad;
        if (x.requires_grad()) {
          auto gx = x.mutable_grad();
          auto wv = weights.data();
          for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t o = 0; o < out_dim; ++o) {
              double go = gy[b * out_dim + o];
              const double* wr = &wv[o * in_dim];
              for (std::size_t i = 0; i < in_dim; ++i) gx[b * in_dim + i] += go * wr[i];
            }
        }
        if (weights.requires_grad()) {
          auto gw = weights.mutable_grad();
          auto xv = x.data();
          for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t o = 0; o < out_dim; ++o) {
              double go = gy[b * out_dim + o];
              const double* xr = &xv[b * in_dim];
              for (std::size_t i = 0; i < in_dim; ++i) gw[o * in_dim + i] += go * xr[i];
            }
        }
        if (bias.defined() && bias.requires_grad()) {
          auto gb = bias.mutable_grad();
          for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t o = 0; o < out_dim; ++o) gb[o] += gy[b * out_dim + o];
        }
      });
}

Tensor scatter_grid(const Tensor& src, std::span<const std::size_t> slots, std::size_t batch,
                    std::size_t rows, std::size_t cols) {
  if (src.rank() != 2 || src.dim(0) != slots.size()) {
    throw ConfigError("scatter_grid: source " + shape_string(src.shape()) + " vs " +
                      std::to_string(slots.size()) + " slots");
  }
  const std::size_t channels = src.dim(1);
  const std::size_t cells = rows * cols;
  std::unordered_set<std::size_t> seen;
  for (std::size_t slot : slots) {
    if (slot >= batch * cells) throw ConfigError("scatter_grid: slot out of range");
    if (!seen.insert(slot).second) throw ConfigError("scatter_grid: duplicate slot");
  }
  std::vector<double> out(batch * channels * cells, 0.0);
  auto sv = src.data();
  auto dest = [channels, cells](std::size_t slot, std::size_t c) {
    std::size_t b = slot / cells;
    std::size_t cell = slot % cells;
    return (b * channels + c) * cells + cell;
  };
  for (std::size_t a = 0; a < slots.size(); ++a)
    for (std::size_t c = 0; c < channels; ++c) out[dest(slots[a], c)] = sv[a * channels + c];
  std::vector<std::size_t> owned(slots.begin(), slots.end());
  return make_result({batch, channels, rows, cols}, std::move(out), {src},
                     [src, owned, channels, dest](Node& self) mutable {
                       if (!src.requires_grad()) return;
                       auto g = src.mutable_grad();
                       for (std::size_t a = 0; a < owned.size(); ++a)
                         for (std::size_t c = 0; c < channels; ++c)
                           g[a * channels + c] += self.grad[dest(owned[a], c)];
                     });
}

}  // namespace trackcast::num
