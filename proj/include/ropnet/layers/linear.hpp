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

#ifndef ROPNET_LAYERS_LINEAR_HPP_
#define ROPNET_LAYERS_LINEAR_HPP_

#include <string>

#include "ropnet/param.hpp"

namespace ropnet {

/// y = x W^T + b with W stored [out x in].
class Linear {
 public:
  struct Tape {
    Tensor input;
    bool recorded = false;
  };

  Linear() = default;
  Linear(const std::string& name, std::size_t in_features, std::size_t out_features,
         SeededRng& rng);

  std::size_t in_features() const { return weight.value.dim(1); }
  std::size_t out_features() const { return weight.value.dim(0); }

  /// x [N x in] -> [N x out].
  Tensor forward(const Tensor& x, Tape* tape) const;
  /// Accumulates dW, db and returns dx.
  Tensor backward(const Tape& tape, const Tensor& dy);

  void collect(ParamRefs& out) { out.insert(out.end(), {&weight, &bias}); }

  Param weight;
  Param bias;
};

}  // namespace ropnet

#endif  // ROPNET_LAYERS_LINEAR_HPP_
