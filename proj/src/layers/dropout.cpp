// Copyright 2026 The ropnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ropnet/layers/dropout.hpp"

#include <string>

#include "ropnet/errors.hpp"

namespace ropnet {

Tensor dropout_apply(const Tensor& x, double rate, SeededRng& rng, bool training,
                     DropoutMask* mask) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw RangeError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (mask) {
    mask->recorded = true;
    mask->active = false;
  }
  if (!training || rate == 0.0) return x;

  const double keep_scale = 1.0 / (1.0 - rate);
  Tensor scale = Tensor::zeros_like(x);
  Tensor y = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    scale[i] = rng.uniform() < rate ? 0.0 : keep_scale;
    y[i] *= scale[i];
  }
  if (mask) {
    mask->scale = std::move(scale);
    mask->active = true;
  }
  return y;
}

Tensor dropout_backward(const DropoutMask& mask, const Tensor& dy) {
  if (!mask.recorded) throw TapeError("dropout: backward without a recorded forward pass");
  if (!mask.active) return dy;
  expect_shape(dy, mask.scale.shape(), "dropout_backward");
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= mask.scale[i];
  return dx;
}

}  // namespace ropnet
