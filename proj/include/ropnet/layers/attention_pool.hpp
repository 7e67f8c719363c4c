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

#ifndef ROPNET_LAYERS_ATTENTION_POOL_HPP_
#define ROPNET_LAYERS_ATTENTION_POOL_HPP_

#include <string>

#include "ropnet/param.hpp"

namespace ropnet {

/// Collapses [B x T x d] to [B x d]: e_t = w . y_t, a = softmax_t(e),
/// out = sum_t a_t y_t. The score vector w has no bias.
class AttentionPool {
 public:
  struct Tape {
    Tensor input;    // [B x T x d]
    Tensor weights;  // [B x T]
    bool recorded = false;
  };

  AttentionPool() = default;
  AttentionPool(const std::string& name, std::size_t width, SeededRng& rng);

  std::size_t width() const { return score.value.size(); }

  Tensor forward(const Tensor& y, Tape* tape) const;
  /// Attention weights a [B x T] for an input, without building a tape.
  Tensor attention_weights(const Tensor& y) const;
  Tensor backward(const Tape& tape, const Tensor& dout);

  void collect(ParamRefs& out) { out.push_back(&score); }

  Param score;
};

}  // namespace ropnet

#endif  // ROPNET_LAYERS_ATTENTION_POOL_HPP_
