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

#include "ropnet/layers/fusion.hpp"

#include "ropnet/errors.hpp"

namespace ropnet {

Tensor concat_columns(const Tensor& left, const Tensor& right) {
  if (left.rank() != 2 || right.rank() != 2 || left.dim(0) != right.dim(0)) {
    throw DimensionError("cannot concatenate " + to_string(left.shape()) + " with " +
                         to_string(right.shape()));
  }
  const std::size_t rows = left.dim(0), a = left.dim(1), b = right.dim(1);
  Tensor out({rows, a + b});
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < a; ++c) out(r, c) = left(r, c);
    for (std::size_t c = 0; c < b; ++c) out(r, a + c) = right(r, c);
  }
  return out;
}

FusionHead::FusionHead(const std::string& name, std::size_t temporal_width,
                       std::size_t static_width, SeededRng& rng)
    : linear(name, temporal_width + static_width, 1, rng), temporal_width_(temporal_width) {}

Tensor FusionHead::forward(const Tensor& temporal, const Tensor& statics, Tape* tape) const {
  if (temporal.rank() != 2 || statics.rank() != 2 || temporal.dim(1) != temporal_width_ ||
      statics.dim(1) != static_width()) {
    throw DimensionError(linear.weight.name + ": expected widths " + std::to_string(temporal_width_) +
                         " + " + std::to_string(static_width()) + ", got " +
                         to_string(temporal.shape()) + " and " + to_string(statics.shape()));
  }
  Tensor out = linear.forward(concat_columns(temporal, statics), tape ? &tape->linear : nullptr);
  if (tape) {
    tape->temporal_width = temporal_width_;
    tape->recorded = true;
  }
  return out;
}

FusionHead::InputGrads FusionHead::backward(const Tape& tape, const Tensor& dout) {
  if (!tape.recorded) throw TapeError(linear.weight.name + ": backward without a recorded forward pass");
  const Tensor dx = linear.backward(tape.linear, dout);
  const std::size_t rows = dx.dim(0), a = temporal_width_, b = static_width();
  InputGrads grads{Tensor({rows, a}), Tensor({rows, b})};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < a; ++c) grads.temporal(r, c) = dx(r, c);
    for (std::size_t c = 0; c < b; ++c) grads.statics(r, c) = dx(r, a + c);
  }
  return grads;
}

}  // namespace ropnet
