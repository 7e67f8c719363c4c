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

#ifndef ROPNET_LAYERS_TRANSFORMER_HPP_
#define ROPNET_LAYERS_TRANSFORMER_HPP_

#include <string>

#include "ropnet/layers/linear.hpp"
#include "ropnet/layers/norm.hpp"
#include "ropnet/param.hpp"

namespace ropnet {

/**
 * Single post-norm encoder block over [B x T x d]:
 *
 *   Q = H Wq, K = H Wk, V = H Wv                  (no projection biases)
 *   head_j = softmax(Q_j K_j^T / sqrt(d_k)) V_j    d_k = d / heads
 *   A = concat(head_1..head_n) Wo
 *   Z = LayerNorm(H + A)
 *   Y = LayerNorm(Z + W2 ReLU(W1 Z + b1) + b2)
 *
 * No positional encoding is added.
 */
class TransformerEncoderBlock {
 public:
  struct Tape {
    Tensor input;      // [B*T x d]
    Tensor q, k, v;    // [B*T x d]
    Tensor weights;    // [B*heads x T x T] softmax rows
    Tensor context;    // [B*T x d] concatenated heads
    LayerNorm::Tape norm1;
    Linear::Tape ffn1;
    Tensor ffn_pre;    // [B*T x ffn] before ReLU
    Linear::Tape ffn2;
    LayerNorm::Tape norm2;
    std::size_t batch = 0;
    std::size_t steps = 0;
    bool recorded = false;
  };

  TransformerEncoderBlock() = default;
  /// Throws ConfigError unless model_dim is divisible by heads.
  TransformerEncoderBlock(const std::string& name, std::size_t model_dim, std::size_t heads,
                          std::size_t ffn_dim, SeededRng& rng);

  std::size_t model_dim() const { return wq.value.dim(0); }
  std::size_t heads() const { return heads_; }
  std::size_t head_dim() const { return model_dim() / heads_; }

  Tensor forward(const Tensor& h, Tape* tape) const;
  Tensor backward(const Tape& tape, const Tensor& dy);

  void collect(ParamRefs& out) {
    out.insert(out.end(), {&wq, &wk, &wv, &wo});
    norm1.collect(out);
    ffn1.collect(out);
    ffn2.collect(out);
    norm2.collect(out);
  }

  Param wq, wk, wv, wo;
  LayerNorm norm1;
  Linear ffn1;
  Linear ffn2;
  LayerNorm norm2;

 private:
  std::size_t heads_ = 1;
};

}  // namespace ropnet

#endif  // ROPNET_LAYERS_TRANSFORMER_HPP_
