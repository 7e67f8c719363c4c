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

#ifndef ROPNET_LAYERS_DROPOUT_HPP_
#define ROPNET_LAYERS_DROPOUT_HPP_

#include "ropnet/rng.hpp"
#include "ropnet/tensor.hpp"

namespace ropnet {

/// Keep-mask of an inverted-dropout pass: 0 for dropped, 1/(1-rate) for kept.
/// An inactive mask means the pass was the identity.
struct DropoutMask {
  Tensor scale;
  bool active = false;
  bool recorded = false;
};

/// Inverted dropout. Identity when not training or when rate == 0.
/// Throws RangeError unless 0 <= rate < 1.
Tensor dropout_apply(const Tensor& x, double rate, SeededRng& rng, bool training,
                     DropoutMask* mask = nullptr);

Tensor dropout_backward(const DropoutMask& mask, const Tensor& dy);

}  // namespace ropnet

#endif  // ROPNET_LAYERS_DROPOUT_HPP_
