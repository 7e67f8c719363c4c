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

#include "ropnet/layers/lstm.hpp"

#include <cmath>

#include "ropnet/errors.hpp"

namespace ropnet {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

LstmLayer::LstmLayer(const std::string& name, std::size_t input_size, std::size_t hidden_size,
                     SeededRng& rng)
    : w(name + ".W", fan_in_uniform(rng, {4 * hidden_size, input_size}, input_size)),
      u(name + ".U", fan_in_uniform(rng, {4 * hidden_size, hidden_size}, hidden_size)),
      b(name + ".b", Tensor({4 * hidden_size})) {}

Tensor LstmLayer::forward(const Tensor& x, Tape* tape) const {
  if (x.rank() != 3 || x.dim(2) != input_size()) {
    throw DimensionError(w.name + ": expected input [B x T x " + std::to_string(input_size()) +
                         "], got " + to_string(x.shape()));
  }
  const std::size_t batch = x.dim(0), steps = x.dim(1), hidden = hidden_size();
  const Tensor x2d = x.reshaped({batch * steps, input_size()});
  Tensor projected = matmul_nt(x2d, w.value);
  add_row_vector(projected, b.value);

  Tensor gates({batch, steps, 4 * hidden});
  Tensor cell({batch, steps, hidden});
  Tensor out({batch, steps, hidden});
  Tensor h_prev({batch, hidden});
  Tensor c_prev({batch, hidden});

  for (std::size_t t = 0; t < steps; ++t) {
    const Tensor recurrent = matmul_nt(h_prev, u.value);
    for (std::size_t s = 0; s < batch; ++s) {
      const double* z_in = projected.raw() + (s * steps + t) * 4 * hidden;
      const double* z_rec = recurrent.raw() + s * 4 * hidden;
      for (std::size_t k = 0; k < hidden; ++k) {
        const double ig = sigmoid(z_in[kInput * hidden + k] + z_rec[kInput * hidden + k]);
        const double fg = sigmoid(z_in[kForget * hidden + k] + z_rec[kForget * hidden + k]);
        const double og = sigmoid(z_in[kOutput * hidden + k] + z_rec[kOutput * hidden + k]);
        const double gg = std::tanh(z_in[kCandidate * hidden + k] + z_rec[kCandidate * hidden + k]);
        const double c = fg * c_prev(s, k) + ig * gg;
        const double h = og * std::tanh(c);
        gates(s, t, kInput * hidden + k) = ig;
        gates(s, t, kForget * hidden + k) = fg;
        gates(s, t, kOutput * hidden + k) = og;
        gates(s, t, kCandidate * hidden + k) = gg;
        cell(s, t, k) = c;
        out(s, t, k) = h;
        c_prev(s, k) = c;
        h_prev(s, k) = h;
      }
    }
  }
  if (tape) {
    tape->input = x2d;
    tape->gates = std::move(gates);
    tape->cell = std::move(cell);
    tape->hidden = out;
    tape->recorded = true;
  }
  return out;
}

Tensor LstmLayer::backward(const Tape& tape, const Tensor& dh) {
  if (!tape.recorded) throw TapeError(w.name + ": backward without a recorded forward pass");
  expect_shape(dh, tape.hidden.shape(), "LstmLayer::backward");
  const std::size_t batch = dh.dim(0), steps = dh.dim(1), hidden = hidden_size();

  // Gate pre-activation gradients for every (sample, step), row = s*T + t.
  Tensor dz({batch * steps, 4 * hidden});
  // Row s*T + t holds h_{t-1} of sample s (zero at t = 0).
  Tensor h_shifted({batch * steps, hidden});
  Tensor dh_next({batch, hidden});
  Tensor dc_next({batch, hidden});

  for (std::size_t step = steps; step-- > 0;) {
    Tensor dz_t({batch, 4 * hidden});
    for (std::size_t s = 0; s < batch; ++s) {
      for (std::size_t k = 0; k < hidden; ++k) {
        const double ig = tape.gates(s, step, kInput * hidden + k);
        const double fg = tape.gates(s, step, kForget * hidden + k);
        const double og = tape.gates(s, step, kOutput * hidden + k);
        const double gg = tape.gates(s, step, kCandidate * hidden + k);
        const double c = tape.cell(s, step, k);
        const double c_prev = step > 0 ? tape.cell(s, step - 1, k) : 0.0;
        const double tanh_c = std::tanh(c);

        const double dh_total = dh(s, step, k) + dh_next(s, k);
        const double dc = dh_total * og * (1.0 - tanh_c * tanh_c) + dc_next(s, k);
        dz_t(s, kInput * hidden + k) = dc * gg * ig * (1.0 - ig);
        dz_t(s, kForget * hidden + k) = dc * c_prev * fg * (1.0 - fg);
        dz_t(s, kOutput * hidden + k) = dh_total * tanh_c * og * (1.0 - og);
        dz_t(s, kCandidate * hidden + k) = dc * ig * (1.0 - gg * gg);
        dc_next(s, k) = dc * fg;
        if (step > 0) h_shifted(s * steps + step, k) = tape.hidden(s, step - 1, k);
      }
      for (std::size_t j = 0; j < 4 * hidden; ++j) dz(s * steps + step, j) = dz_t(s, j);
    }
    dh_next = matmul(dz_t, u.value);
  }

  w.grad += matmul_tn(dz, tape.input);
  u.grad += matmul_tn(dz, h_shifted);
  b.grad += column_sums(dz);
  return matmul(dz, w.value).reshaped({batch, steps, input_size()});
}

LstmStack::LstmStack(const std::string& name, std::size_t input_size, std::size_t hidden_size,
                     std::size_t num_layers, double inter_layer_dropout, SeededRng& rng)
    : dropout_(inter_layer_dropout) {
  if (num_layers == 0) throw ConfigError(name + ": an LSTM stack needs at least one layer");
  if (!(inter_layer_dropout >= 0.0 && inter_layer_dropout < 1.0)) {
    throw ConfigError(name + ": inter-layer dropout must lie in [0, 1)");
  }
  for (std::size_t l = 0; l < num_layers; ++l) {
    layers_.emplace_back(name + "." + std::to_string(l), l == 0 ? input_size : hidden_size,
                         hidden_size, rng);
  }
}

Tensor LstmStack::forward(const Tensor& x, Tape* tape, bool training, SeededRng* dropout_rng) const {
  if (tape) {
    tape->layers.assign(layers_.size(), {});
    tape->dropouts.assign(layers_.size() - 1, {});
  }
  const bool use_dropout = training && dropout_ > 0.0;
  if (use_dropout && !dropout_rng) throw ConfigError("LSTM dropout in training mode needs an RNG");
  Tensor h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    h = layers_[l].forward(h, tape ? &tape->layers[l] : nullptr);
    if (l + 1 < layers_.size() && use_dropout) {
      h = dropout_apply(h, dropout_, *dropout_rng, true, tape ? &tape->dropouts[l] : nullptr);
    } else if (l + 1 < layers_.size() && tape) {
      tape->dropouts[l].recorded = true;
    }
  }
  if (tape) tape->recorded = true;
  return h;
}

Tensor LstmStack::backward(const Tape& tape, const Tensor& dh) {
  if (!tape.recorded) throw TapeError("LstmStack: backward without a recorded forward pass");
  Tensor grad = dh;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    if (l + 1 < layers_.size()) grad = dropout_backward(tape.dropouts[l], grad);
    grad = layers_[l].backward(tape.layers[l], grad);
  }
  return grad;
}

}  // namespace ropnet
