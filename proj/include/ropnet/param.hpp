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

#ifndef ROPNET_PARAM_HPP_
#define ROPNET_PARAM_HPP_

#include <string>
#include <vector>

#include "ropnet/rng.hpp"
#include "ropnet/tensor.hpp"

namespace ropnet {

/// A named tensor with its gradient accumulator. Non-trainable entries
/// (batch-norm running statistics) are checkpointed but never optimized.
struct Param {
  std::string name;
  Tensor value;
  Tensor grad;
  bool trainable = true;

  Param() = default;
  Param(std::string param_name, Tensor initial, bool is_trainable = true)
      : name(std::move(param_name)),
        value(std::move(initial)),
        grad(Tensor::zeros_like(value)),
        trainable(is_trainable) {}

  void zero_grad() {
    if (!grad.empty()) grad.fill(0.0);
  }
};

using ParamRefs = std::vector<Param*>;

/// U(-1/sqrt(fan_in), +1/sqrt(fan_in)), the default linear/recurrent init.
Tensor fan_in_uniform(SeededRng& rng, Shape shape, std::size_t fan_in);

}  // namespace ropnet

#endif  // ROPNET_PARAM_HPP_
