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

#include "ropnet/layers/linear.hpp"

#include "ropnet/errors.hpp"

namespace ropnet {

Linear::Linear(const std::string& name, std::size_t in_features, std::size_t out_features,
               SeededRng& rng)
    : weight(name + ".weight", fan_in_uniform(rng, {out_features, in_features}, in_features)),
      bias(name + ".bias", Tensor({out_features})) {}

Tensor Linear::forward(const Tensor& x, Tape* tape) const {
  if (x.rank() != 2 || x.dim(1) != in_features()) {
    throw DimensionError(weight.name + ": expected input [N x " + std::to_string(in_features()) +
                         "], got " + to_string(x.shape()));
  }
  Tensor y = matmul_nt(x, weight.value);
  add_row_vector(y, bias.value);
  if (tape) {
    tape->input = x;
    tape->recorded = true;
  }
  return y;
}

Tensor Linear::backward(const Tape& tape, const Tensor& dy) {
  if (!tape.recorded) throw TapeError(weight.name + ": backward without a recorded forward pass");
  expect_shape(dy, {tape.input.dim(0), out_features()}, "Linear::backward");
  weight.grad += matmul_tn(dy, tape.input);
  bias.grad += column_sums(dy);
  return matmul(dy, weight.value);
}

}  // namespace ropnet
