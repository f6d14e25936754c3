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
#include <string>

#include "trackcast/num/tensor.hpp"

namespace trackcast::num {

/// How a length-preserving temporal convolution extends its input.
enum class PadMode {
  kCausalLeft,  ///< all (k-1)*d zeros before the first step
  kSymmetric,   ///< ceil((k-1)*d / 2) zeros on each side, surplus cropped on the right
};

const char* to_string(PadMode mode);
PadMode pad_mode_from_string(const std::string& text);

/// One-dimensional (possibly grouped, dilated) kernel.
///
/// Tap i multiplies the input `dilation * i` steps in the past:
///   out[s] = bias + sum_i weights[i] * x[s - dilation * i]
/// so tap 0 is aligned with the current step.
struct Kernel1D {
  Tensor weights;  ///< [outChannels x inChannels/groups x taps]
  Tensor bias;     ///< [outChannels]; may be undefined
  std::size_t dilation = 1;
  std::size_t groups = 1;

  std::size_t taps() const { return weights.dim(2); }
  std::size_t out_channels() const { return weights.dim(0); }
  std::size_t in_channels() const { return weights.dim(1) * groups; }
};

/// Explicit zero padding around the time axis of a conv1d.
struct TimePadding {
  std::size_t left = 0;
  std::size_t right = 0;
};

/// Raw grouped dilated convolution. x is [C_in x T] or [B x C_in x T]; the
/// output has T + left + right - (k-1)*d steps.
Tensor conv1d(const Tensor& x, const Kernel1D& kernel, TimePadding padding);

/// Per-side zero count that makes a stride-1 dilated kernel length preserving
/// under symmetric padding.
std::size_t symmetric_padding(std::size_t taps, std::size_t dilation);

/// Length-preserving dilated convolution (output has T steps).
Tensor dilated_conv1d(const Tensor& x, const Kernel1D& kernel, PadMode mode);

/// One k-tap filter per channel; requires groups == C_in == C_out.
Tensor depthwise_conv1d(const Tensor& x, const Kernel1D& kernel, PadMode mode = PadMode::kCausalLeft);

/// 1x1 cross-channel mix; requires k == 1 and d == 1.
Tensor pointwise_conv1d(const Tensor& x, const Kernel1D& kernel);

struct Conv2dGeometry {
  std::size_t stride_h = 1;
  std::size_t stride_w = 1;
  std::size_t pad_h = 0;
  std::size_t pad_w = 0;
};

/// Cross-correlation. x is [C_in x H x W] or [B x C_in x H x W]; weights are
/// [C_out x C_in x kh x kw]; bias [C_out] may be undefined.
Tensor conv2d(const Tensor& x, const Tensor& weights, const Tensor& bias, Conv2dGeometry geometry);

struct PoolGeometry {
  std::size_t window_h = 2;
  std::size_t window_w = 1;
  std::size_t stride_h = 2;
  std::size_t stride_w = 1;
  std::size_t pad_h = 0;
  std::size_t pad_w = 0;
};

/// Per-window maxima; padded cells never win.
Tensor max_pool2d(const Tensor& x, PoolGeometry geometry);

/// floor((in + 2 * pad - window) / stride) + 1, or 0 when the window does not fit.
std::size_t pooled_extent(std::size_t in, std::size_t window, std::size_t stride, std::size_t pad);

}  // namespace trackcast::num
