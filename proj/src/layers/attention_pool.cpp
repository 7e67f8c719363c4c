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

#include "ropnet/layers/attention_pool.hpp"

#include <vector>

#include "ropnet/errors.hpp"

namespace ropnet {

AttentionPool::AttentionPool(const std::string& name, std::size_t width, SeededRng& rng)
    : score(name + ".w", fan_in_uniform(rng, {width}, width)) {}

Tensor AttentionPool::attention_weights(const Tensor& y) const {
  const std::size_t d = width();
  if (y.rank() != 3 || y.dim(2) != d) {
    throw DimensionError(score.name + ": expected input [B x T x " + std::to_string(d) + "], got " +
                         to_string(y.shape()));
  }
  const std::size_t batch = y.dim(0), steps = y.dim(1);
  Tensor e({batch, steps});
  for (std::size_t s = 0; s < batch; ++s)
    for (std::size_t t = 0; t < steps; ++t) {
      double dot = 0.0;
      for (std::size_t c = 0; c < d; ++c) dot += score.value[c] * y(s, t, c);
      e(s, t) = dot;
    }
  return softmax_last_axis(e);
}

Tensor AttentionPool::forward(const Tensor& y, Tape* tape) const {
  Tensor a = attention_weights(y);
  const std::size_t batch = y.dim(0), steps = y.dim(1), d = width();
  Tensor out({batch, d});
  for (std::size_t s = 0; s < batch; ++s)
    for (std::size_t t = 0; t < steps; ++t)
      for (std::size_t c = 0; c < d; ++c) out(s, c) += a(s, t) * y(s, t, c);
  if (tape) {
    tape->input = y;
    tape->weights = std::move(a);
    tape->recorded = true;
  }
  return out;
}

Tensor AttentionPool::backward(const Tape& tape, const Tensor& dout) {
  if (!tape.recorded) throw TapeError(score.name + ": backward without a recorded forward pass");
  const Tensor& y = tape.input;
  const std::size_t batch = y.dim(0), steps = y.dim(1), d = width();
  expect_shape(dout, {batch, d}, "AttentionPool::backward");
  Tensor dy = Tensor::zeros_like(y);
  std::vector<double> da(steps);
  for (std::size_t s = 0; s < batch; ++s) {
    double weighted = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
      double dot = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        dot += dout(s, c) * y(s, t, c);
        dy(s, t, c) += tape.weights(s, t) * dout(s, c);
      }
      da[t] = dot;
      weighted += tape.weights(s, t) * dot;
    }
    for (std::size_t t = 0; t < steps; ++t) {
      const double de = tape.weights(s, t) * (da[t] - weighted);
      for (std::size_t c = 0; c < d; ++c) {
        score.grad[c] += de * y(s, t, c);
        dy(s, t, c) += de * score.value[c];
      }
    }
  }
  return dy;
}

}  // namespace ropnet
