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

#include "trackcast/num/conv.hpp"

#include <limits>
#include <string>

#include "trackcast/errors.hpp"
#include "trackcast/num/ops.hpp"

namespace trackcast::num {

const char* to_string(PadMode mode) {
  return mode == PadMode::kCausalLeft ? "causal-left" : "symmetric-crop";
}

PadMode pad_mode_from_string(const std::string& text) {
  if (text == "causal-left" || text == "causal") return PadMode::kCausalLeft;
  if (text == "symmetric-crop" || text == "symmetric") return PadMode::kSymmetric;
  throw ConfigError("unknown pad mode '" + text + "'");
}

std::size_t pooled_extent(std::size_t in, std::size_t window, std::size_t stride, std::size_t pad) {
  if (stride == 0) throw ConfigError("stride must be positive");
  std::size_t padded = in + 2 * pad;
  if (window == 0 || window > padded) return 0;
  return (padded - window) / stride + 1;
}

std::size_t symmetric_padding(std::size_t taps, std::size_t dilation) {
  return ((taps - 1) * dilation + 1) / 2;
}

namespace {

struct Conv1dDims {
  std::size_t batch, in_channels, steps, out_channels, in_per_group, out_per_group, taps,
      dilation, groups, out_steps;
};

Conv1dDims check_conv1d(const Tensor& x, const Kernel1D& k, TimePadding pad) {
  if (!k.weights.defined() || k.weights.rank() != 3) {
    throw ConfigError("conv1d: weights must be [out x in/groups x k]");
  }
  if (x.rank() != 2 && x.rank() != 3) {
    throw ConfigError("conv1d: input must be [C x T] or [B x C x T], got " + shape_string(x.shape()));
  }
  Conv1dDims d{};
  d.batch = x.rank() == 3 ? x.dim(0) : 1;
  d.in_channels = x.dim(x.rank() - 2);
  d.steps = x.dim(x.rank() - 1);
  d.out_channels = k.weights.dim(0);
  d.in_per_group = k.weights.dim(1);
  d.taps = k.weights.dim(2);
  d.dilation = k.dilation;
  d.groups = k.groups;
  if (d.dilation < 1 || d.groups < 1) throw ConfigError("conv1d: dilation and groups must be >= 1");
  if (d.out_channels % d.groups != 0 || d.in_per_group * d.groups != d.in_channels) {
    throw ConfigError("conv1d: kernel " + shape_string(k.weights.shape()) + " with " +
                      std::to_string(d.groups) + " groups does not fit " +
                      std::to_string(d.in_channels) + " input channels");
  }
  if (k.bias.defined() && k.bias.shape() != Shape{d.out_channels}) {
    throw ConfigError("conv1d: bias shape " + shape_string(k.bias.shape()));
  }
  d.out_per_group = d.out_channels / d.groups;
  std::size_t span = (d.taps - 1) * d.dilation;
  std::size_t padded = d.steps + pad.left + pad.right;
  if (padded <= span) throw ConfigError("conv1d: kernel span exceeds padded input");
  d.out_steps = padded - span;
  return d;
}

}  // namespace

Tensor conv1d(const Tensor& x, const Kernel1D& kernel, TimePadding pad) {
  const Conv1dDims d = check_conv1d(x, kernel, pad);
  const std::size_t span = (d.taps - 1) * d.dilation;
  auto xv = x.data();
  auto wv = kernel.weights.data();
  std::vector<double> out(d.batch * d.out_channels * d.out_steps);

  // Output step j reads padded position j + span - d*i, i.e. input index
  // j + span - d*i - left.
  auto input_index = [span, dilation = d.dilation, left = pad.left](std::size_t j,
                                                                  std::size_t i) -> std::ptrdiff_t {
    return static_cast<std::ptrdiff_t>(j + span) - static_cast<std::ptrdiff_t>(dilation * i) -
           static_cast<std::ptrdiff_t>(left);
  };

  for (std::size_t b = 0; b < d.batch; ++b) {
    for (std::size_t o = 0; o < d.out_channels; ++o) {
      double* yo = &out[(b * d.out_channels + o) * d.out_steps];
      double bias = kernel.bias.defined() ? kernel.bias.data()[o] : 0.0;
      for (std::size_t j = 0; j < d.out_steps; ++j) yo[j] = bias;
      const std::size_t group = o / d.out_per_group;
      for (std::size_t c = 0; c < d.in_per_group; ++c) {
        const std::size_t ci = group * d.in_per_group + c;
        const double* xc = &xv[(b * d.in_channels + ci) * d.steps];
        const double* w = &wv[(o * d.in_per_group + c) * d.taps];
        for (std::size_t i = 0; i < d.taps; ++i) {
          for (std::size_t j = 0; j < d.out_steps; ++j) {
            std::ptrdiff_t t = input_index(j, i);
            if (t >= 0 && t < static_cast<std::ptrdiff_t>(d.steps)) yo[j] += w[i] * xc[t];
          }
        }
      }
    }
  }

  Shape out_shape = x.rank() == 3 ? Shape{d.batch, d.out_channels, d.out_steps}
                                  : Shape{d.out_channels, d.out_steps};
  std::vector<Tensor> inputs{x, kernel.weights};
  if (kernel.bias.defined()) inputs.push_back(kernel.bias);
  Tensor xw = x;
  Tensor ww = kernel.weights;
  Tensor bw = kernel.bias;
  return make_result(
      std::move(out_shape), std::move(out), inputs,
      [xw, ww, bw, d, input_index](Node& self) mutable {
        const auto& gy = self.grad;
        const bool gx_needed = xw.requires_grad();
        const bool gw_needed = ww.requires_grad();
        std::span<double> gx = gx_needed ? xw.mutable_grad() : std::span<double>{};
        std::span<double> gw = gw_needed ? ww.mutable_grad() : std::span<double>{};
        auto xv = xw.data();
        auto wv = ww.data();
        for (std::size_t b = 0; b < d.batch; ++b) {
          for (std::size_t o = 0; o < d.out_channels; ++o) {
            const double* go = &gy[(b * d.out_channels + o) * d.out_steps];
            const std::size_t group = o / d.out_per_group;
            for (std::size_t c = 0; c < d.in_per_group; ++c) {
              const std::size_t ci = group * d.in_per_group + c;
              const std::size_t xoff = (b * d.in_channels + ci) * d.steps;
              const std::size_t woff = (o * d.in_per_group + c) * d.taps;
              for (std::size_t i = 0; i < d.taps; ++i) {
                double wacc = 0.0;
                for (std::size_t j = 0; j < d.out_steps; ++j) {
                  std::ptrdiff_t t = input_index(j, i);
                  if (t < 0 || t >= static_cast<std::ptrdiff_t>(d.steps)) continue;
                  if (gx_needed) gx[xoff + t] += go[j] * wv[woff + i];
                  wacc += go[j] * xv[xoff + t];
                }
                if (gw_needed) gw[woff + i] += wacc;
              }
            }
          }
        }
        if (bw.defined() && bw.requires_grad()) {
          auto gb = bw.mutable_grad();
          for (std::size_t b = 0; b < d.batch; ++b)
            for (std::size_t o = 0; o < d.out_channels; ++o) {
              const double* go = &gy[(b * d.out_channels + o) * d.out_steps];
              for (std::size_t j = 0; j < d.out_steps; ++j) gb[o] += go[j];
            }
        }
      });
}

Tensor dilated_conv1d(const Tensor& x, const Kernel1D& kernel, PadMode mode) {
  if (kernel.weights.rank() != 3) throw ConfigError("dilated_conv1d: weights must be rank 3");
  if (x.rank() < 2) throw ConfigError("dilated_conv1d: input must be [C x T] or [B x C x T]");
  const std::size_t span = (kernel.taps() - 1) * kernel.dilation;
  const std::size_t steps = x.dim(x.rank() - 1);
  if (mode == PadMode::kCausalLeft) return conv1d(x, kernel, {span, 0});
  const std::size_t p = symmetric_padding(kernel.taps(), kernel.dilation);
  Tensor y = conv1d(x, kernel, {p, p});
  const std::size_t time_axis = y.rank() - 1;
  if (y.dim(time_axis) == steps) return y;
  return slice(y, time_axis, 0, steps);
}

Tensor depthwise_conv1d(const Tensor& x, const Kernel1D& kernel, PadMode mode) {
  if (x.rank() < 2) throw ConfigError("depthwise_conv1d: input must be [C x T] or [B x C x T]");
  const std::size_t channels = x.dim(x.rank() - 2);
  if (kernel.groups != channels || kernel.out_channels() != channels || kernel.weights.dim(1) != 1) {
    throw ConfigError("depthwise_conv1d: requires groups == C_in == C_out (C_in = " +
                      std::to_string(channels) + ", groups = " + std::to_string(kernel.groups) + ")");
  }
  return dilated_conv1d(x, kernel, mode);
}

Tensor pointwise_conv1d(const Tensor& x, const Kernel1D& kernel) {
  if (kernel.weights.rank() != 3 || kernel.taps() != 1 || kernel.dilation != 1) {
    throw ConfigError("pointwise_conv1d: requires k == 1 and d == 1");
  }
  return conv1d(x, kernel, {0, 0});
}

Tensor conv2d(const Tensor& x, const Tensor& weights, const Tensor& bias, Conv2dGeometry g) {
  if (weights.rank() != 4) throw ConfigError("conv2d: weights must be [out x in x kh x kw]");
  if (x.rank() != 3 && x.rank() != 4) throw ConfigError("conv2d: input must be rank 3 or 4");
  const bool batched = x.rank() == 4;
  const std::size_t batch = batched ? x.dim(0) : 1;
  const std::size_t cin = x.dim(batched ? 1 : 0);
  const std::size_t h = x.dim(batched ? 2 : 1);
  const std::size_t w = x.dim(batched ? 3 : 2);
  const std::size_t cout = weights.dim(0);
  const std::size_t kh = weights.dim(2);
  const std::size_t kw = weights.dim(3);
  if (weights.dim(1) != cin) {
    throw ConfigError("conv2d: weights " + shape_string(weights.shape()) + " vs input " +
                      shape_string(x.shape()));
  }
  if (bias.defined() && bias.shape() != Shape{cout}) throw ConfigError("conv2d: bias shape");
  const std::size_t oh = pooled_extent(h, kh, g.stride_h, g.pad_h);
  const std::size_t ow = pooled_extent(w, kw, g.stride_w, g.pad_w);
  if (oh == 0 || ow == 0) throw ConfigError("conv2d: kernel larger than padded input");

  auto xv = x.data();
  auto wv = weights.data();
  std::vector<double> out(batch * cout * oh * ow);
  auto in_row = [g](std::size_t oy, std::size_t u) {
    return static_cast<std::ptrdiff_t>(oy * g.stride_h + u) - static_cast<std::ptrdiff_t>(g.pad_h);
  };
  auto in_col = [g](std::size_t ox, std::size_t v) {
    return static_cast<std::ptrdiff_t>(ox * g.stride_w + v) - static_cast<std::ptrdiff_t>(g.pad_w);
  };
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t o = 0; o < cout; ++o)
      for (std::size_t oy = 0; oy < oh; ++oy)
        for (std::size_t ox = 0; ox < ow; ++ox) {
          double acc = bias.defined() ? bias.data()[o] : 0.0;
          for (std::size_t c = 0; c < cin; ++c)
            for (std::size_t u = 0; u < kh; ++u) {
              std::ptrdiff_t iy = in_row(oy, u);
              if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
              for (std::size_t v = 0; v < kw; ++v) {
                std::ptrdiff_t ix = in_col(ox, v);
                if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
                acc += wv[((o * cin + c) * kh + u) * kw + v] * xv[((b * cin + c) * h + iy) * w + ix];
              }
            }
          out[((b * cout + o) * oh + oy) * ow + ox] = acc;
        }

  Shape out_shape = batched ? Shape{batch, cout, oh, ow} : Shape{cout, oh, ow};
  std::vector<Tensor> inputs{x, weights};
  if (bias.defined()) inputs.push_back(bias);
  Tensor xw = x;
  Tensor ww = weights;
  Tensor bw = bias;
  return make_result(
      std::move(out_shape), std::move(out), inputs,
      [=](Node& self) mutable {
        const auto& gy = self.grad;
        const bool gx_needed = xw.requires_grad();
        const bool gw_needed = ww.requires_grad();
        std::span<double> gx = gx_needed ? xw.mutable_grad() : std::span<double>{};
        std::span<double> gw = gw_needed ? ww.mutable_grad() : std::span<double>{};
        auto xv = xw.data();
        auto wv = ww.data();
        for (std::size_t b = 0; b < batch; ++b)
          for (std::size_t o = 0; o < cout; ++o)
            for (std::size_t oy = 0; oy < oh; ++oy)
              for (std::size_t ox = 0; ox < ow; ++ox) {
                double go = gy[((b * cout + o) * oh + oy) * ow + ox];
                if (go == 0.0) continue;
                for (std::size_t c = 0; c < cin; ++c)
                  for (std::size_t u = 0; u < kh; ++u) {
                    std::ptrdiff_t iy = in_row(oy, u);
                    if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
                    for (std::size_t v = 0; v < kw; ++v) {
                      std::ptrdiff_t ix = in_col(ox, v);
                      if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
                      std::size_t wi = ((o * cin + c) * kh + u) * kw + v;
                      std::size_t xi = ((b * cin + c) * h + iy) * w + ix;
                      if (gx_needed) gx[xi] += go * wv[wi];
                      if (gw_needed) gw[wi] += go * xv[xi];
                    }
                  }
              }
        if (bw.defined() && bw.requires_grad()) {
          auto gb = bw.mutable_grad();
          for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t o = 0; o < cout; ++o)
              for (std::size_t k = 0; k < oh * ow; ++k) gb[o] += gy[(b * cout + o) * oh * ow + k];
        }
      });
}

Tensor max_pool2d(const Tensor& x, PoolGeometry g) {
  if (x.rank() != 3 && x.rank() != 4) throw ConfigError("max_pool2d: input must be rank 3 or 4");
  const bool batched = x.rank() == 4;
  const std::size_t planes = batched ? x.dim(0) * x.dim(1) : x.dim(0);
  const std::size_t h = x.dim(x.rank() - 2);
  const std::size_t w = x.dim(x.rank() - 1);
  const std::size_t oh = pooled_extent(h, g.window_h, g.stride_h, g.pad_h);
  const std::size_t ow = pooled_extent(w, g.window_w, g.stride_w, g.pad_w);
  if (oh == 0 || ow == 0) throw ConfigError("max_pool2d: window larger than padded input");
  if (g.pad_h >= g.window_h || g.pad_w >= g.window_w) {
    throw ConfigError("max_pool2d: padding must be smaller than the window");
  }
  auto xv = x.data();
  std::vector<double> out(planes * oh * ow);
  std::vector<std::size_t> argmax(out.size());
  for (std::size_t p = 0; p < planes; ++p)
    for (std::size_t oy = 0; oy < oh; ++oy)
      for (std::size_t ox = 0; ox < ow; ++ox) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_index = 0;
        bool found = false;
        for (std::size_t u = 0; u < g.window_h; ++u) {
          std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride_h + u) -
                              static_cast<std::ptrdiff_t>(g.pad_h);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
          for (std::size_t v = 0; v < g.window_w; ++v) {
            std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride_w + v) -
                                static_cast<std::ptrdiff_t>(g.pad_w);
            if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
            std::size_t idx = (p * h + iy) * w + ix;
            if (!found || xv[idx] > best) {
              best = xv[idx];
              best_index = idx;
              found = true;
            }
          }
        }
        std::size_t oi = (p * oh + oy) * ow + ox;
        out[oi] = best;
        argmax[oi] = best_index;
      }
  Shape out_shape = x.shape();
  out_shape[x.rank() - 2] = oh;
  out_shape[x.rank() - 1] = ow;
  Tensor xw = x;
  return make_result(std::move(out_shape), std::move(out), {x},
                     [xw, argmax](Node& self) mutable {
                       if (!xw.requires_grad()) return;
                       auto gx = xw.mutable_grad();
                       for (std::size_t i = 0; i < argmax.size(); ++i) gx[argmax[i]] += self.grad[i];
                     });
}

}  // namespace trackcast::num
