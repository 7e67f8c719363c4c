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

#include "ropnet/layers/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ropnet/errors.hpp"

namespace ropnet {

TransformerEncoderBlock::TransformerEncoderBlock(const std::string& name, std::size_t model_dim,
                                                 std::size_t heads, std::size_t ffn_dim,
                                                 SeededRng& rng)
    : heads_(heads) {
  if (heads == 0 || model_dim % heads != 0) {
    throw ConfigError(name + ": model dimension " + std::to_string(model_dim) +
                      " is not divisible by " + std::to_string(heads) + " heads");
  }
  wq = Param(name + ".wq", fan_in_uniform(rng, {model_dim, model_dim}, model_dim));
  wk = Param(name + ".wk", fan_in_uniform(rng, {model_dim, model_dim}, model_dim));
  wv = Param(name + ".wv", fan_in_uniform(rng, {model_dim, model_dim}, model_dim));
  wo = Param(name + ".wo", fan_in_uniform(rng, {model_dim, model_dim}, model_dim));
  norm1 = LayerNorm(name + ".norm1", model_dim);
  ffn1 = Linear(name + ".ffn1", model_dim, ffn_dim, rng);
  ffn2 = Linear(name + ".ffn2", ffn_dim, model_dim, rng);
  norm2 = LayerNorm(name + ".norm2", model_dim);
}

Tensor TransformerEncoderBlock::forward(const Tensor& h, Tape* tape) const {
  const std::size_t d = model_dim();
  if (h.rank() != 3 || h.dim(2) != d) {
    throw DimensionError(wq.name + ": expected input [B x T x " + std::to_string(d) + "], got " +
                         to_string(h.shape()));
  }
  const std::size_t batch = h.dim(0), steps = h.dim(1), dk = head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  const Tensor x = h.reshaped({batch * steps, d});
  Tensor q = matmul(x, wq.value);
  Tensor k = matmul(x, wk.value);
  Tensor v = matmul(x, wv.value);

  Tensor weights({batch * heads_, steps, steps});
  Tensor context({batch * steps, d});
  std::vector<double> scores(steps);
  for (std::size_t s = 0; s < batch; ++s) {
    for (std::size_t head = 0; head < heads_; ++head) {
      const std::size_t off = head * dk;
      for (std::size_t i = 0; i < steps; ++i) {
        const double* qi = q.raw() + (s * steps + i) * d + off;
        double peak = -INFINITY;
        for (std::size_t j = 0; j < steps; ++j) {
          const double* kj = k.raw() + (s * steps + j) * d + off;
          double dot = 0.0;
          for (std::size_t c = 0; c < dk; ++c) dot += qi[c] * kj[c];
          scores[j] = dot * scale;
          peak = std::max(peak, scores[j]);
        }
        double total = 0.0;
        for (std::size_t j = 0; j < steps; ++j) {
          scores[j] = std::exp(scores[j] - peak);
          total += scores[j];
        }
        double* ctx = context.raw() + (s * steps + i) * d + off;
        for (std::size_t j = 0; j < steps; ++j) {
          const double a = scores[j] / total;
          weights(s * heads_ + head, i, j) = a;
          const double* vj = v.raw() + (s * steps + j) * d + off;
          for (std::size_t c = 0; c < dk; ++c) ctx[c] += a * vj[c];
        }
      }
    }
  }

  Tensor residual1 = matmul(context, wo.value);
  residual1 += x;
  LayerNorm::Tape* norm1_tape = tape ? &tape->norm1 : nullptr;
  Tensor z = norm1.forward(residual1, norm1_tape);

  Tensor pre = ffn1.forward(z, tape ? &tape->ffn1 : nullptr);
  Tensor act = pre;
  for (double& a : act.data()) a = a > 0.0 ? a : 0.0;
  Tensor residual2 = ffn2.forward(act, tape ? &tape->ffn2 : nullptr);
  residual2 += z;
  Tensor y = norm2.forward(residual2, tape ? &tape->norm2 : nullptr);

  if (tape) {
    tape->input = x;
    tape->q = std::move(q);
    tape->k = std::move(k);
    tape->v = std::move(v);
    tape->weights = std::move(weights);
    tape->context = std::move(context);
    tape->ffn_pre = std::move(pre);
    tape->batch = batch;
    tape->steps = steps;
    tape->recorded = true;
  }
  return std::move(y).reshaped({batch, steps, d});
}

Tensor TransformerEncoderBlock::backward(const Tape& tape, const Tensor& dy) {
  if (!tape.recorded) throw TapeError(wq.name + ": backward without a recorded forward pass");
  const std::size_t batch = tape.batch, steps = tape.steps, d = model_dim(), dk = head_dim();
  expect_shape(dy, {batch, steps, d}, "TransformerEncoderBlock::backward");
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

  // Second sub-layer: y = LN2(z + ffn(z)).
  Tensor g2 = norm2.backward(tape.norm2, dy.reshaped({batch * steps, d}));
  Tensor dact = ffn2.backward(tape.ffn2, g2);
  for (std::size_t i = 0; i < dact.size(); ++i) {
    if (tape.ffn_pre[i] <= 0.0) dact[i] = 0.0;
  }
  Tensor dz = ffn1.backward(tape.ffn1, dact);
  dz += g2;

  // First sub-layer: z = LN1(x + context Wo).
  Tensor g1 = norm1.backward(tape.norm1, dz);
  wo.grad += matmul_tn(tape.context, g1);
  const Tensor dcontext = matmul_nt(g1, wo.value);

  Tensor dq({batch * steps, d});
  Tensor dk_({batch * steps, d});
  Tensor dv({batch * steps, d});
  std::vector<double> dweights(steps);
  for (std::size_t s = 0; s < batch; ++s) {
    for (std::size_t head = 0; head < heads_; ++head) {
      const std::size_t off = head * dk;
      for (std::size_t i = 0; i < steps; ++i) {
        const double* dctx = dcontext.raw() + (s * steps + i) * d + off;
        double weighted = 0.0;
        for (std::size_t j = 0; j < steps; ++j) {
          const double a = tape.weights(s * heads_ + head, i, j);
          const double* vj = tape.v.raw() + (s * steps + j) * d + off;
          double* dvj = dv.raw() + (s * steps + j) * d + off;
          double dot = 0.0;
          for (std::size_t c = 0; c < dk; ++c) {
            dot += dctx[c] * vj[c];
            dvj[c] += a * dctx[c];
          }
          dweights[j] = dot;
          weighted += a * dot;
        }
        const double* qi = tape.q.raw() + (s * steps + i) * d + off;
        double* dqi = dq.raw() + (s * steps + i) * d + off;
        for (std::size_t j = 0; j < steps; ++j) {
          const double a = tape.weights(s * heads_ + head, i, j);
          const double dscore = a * (dweights[j] - weighted) * scale;
          const double* kj = tape.k.raw() + (s * steps + j) * d + off;
          double* dkj = dk_.raw() + (s * steps + j) * d + off;
          for (std::size_t c = 0; c < dk; ++c) {
            dqi[c] += dscore * kj[c];
            dkj[c] += dscore * qi[c];
          }
        }
      }
    }
  }

  wq.grad += matmul_tn(tape.input, dq);
  wk.grad += matmul_tn(tape.input, dk_);
  wv.grad += matmul_tn(tape.input, dv);
  Tensor dx = g1;
  dx += matmul_nt(dq, wq.value);
  dx += matmul_nt(dk_, wk.value);
  dx += matmul_nt(dv, wv.value);
  return std::move(dx).reshaped({batch, steps, d});
}

}  // namespace ropnet
