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

#ifndef ROPNET_LAYERS_LSTM_HPP_
#define ROPNET_LAYERS_LSTM_HPP_

#include <string>
#include <vector>

#include "ropnet/layers/dropout.hpp"
#include "ropnet/param.hpp"

namespace ropnet {

/**
 * One LSTM layer over a [B x T x in] batch, zero initial state.
 *
 *   i = sigma(W_i x + U_i h + b_i)   f = sigma(W_f x + U_f h + b_f)
 *   o = sigma(W_o x + U_o h + b_o)   g = tanh(W_g x + U_g h + b_g)
 *   c = f * c_prev + i * g           h = o * tanh(c)
 *
 * The four gate matrices are stacked row-wise in the order i, f, o, g:
 * W [4H x in], U [4H x H], b [4H].
 */
class LstmLayer {
 public:
  enum Gate : std::size_t { kInput = 0, kForget = 1, kOutput = 2, kCandidate = 3 };

  struct Tape {
    Tensor input;      // [B*T x in]
    Tensor gates;      // [B x T x 4H], post-activation
    Tensor cell;       // [B x T x H]
    Tensor hidden;     // [B x T x H]
    bool recorded = false;
  };

  LstmLayer() = default;
  LstmLayer(const std::string& name, std::size_t input_size, std::size_t hidden_size,
            SeededRng& rng);

  std::size_t input_size() const { return w.value.dim(1); }
  std::size_t hidden_size() const { return u.value.dim(1); }

  Tensor forward(const Tensor& x, Tape* tape) const;
  /// dh [B x T x H] is the loss gradient w.r.t. every emitted hidden state.
  Tensor backward(const Tape& tape, const Tensor& dh);

  void collect(ParamRefs& out) { out.insert(out.end(), {&w, &u, &b}); }

  Param w;
  Param u;
  Param b;
};

/// Stacked LSTM layers with optional inverted dropout between layers.
class LstmStack {
 public:
  struct Tape {
    std::vector<LstmLayer::Tape> layers;
    std::vector<DropoutMask> dropouts;
    bool recorded = false;
  };

  LstmStack() = default;
  LstmStack(const std::string& name, std::size_t input_size, std::size_t hidden_size,
            std::size_t num_layers, double inter_layer_dropout, SeededRng& rng);

  std::size_t input_size() const { return layers_.front().input_size(); }
  std::size_t hidden_size() const { return layers_.front().hidden_size(); }
  std::size_t num_layers() const { return layers_.size(); }
  const std::vector<LstmLayer>& layers() const { return layers_; }
  std::vector<LstmLayer>& layers() { return layers_; }

  /// x [B x T x in] -> top-layer hidden states [B x T x H].
  Tensor forward(const Tensor& x, Tape* tape, bool training, SeededRng* dropout_rng) const;
  Tensor backward(const Tape& tape, const Tensor& dh);

  void collect(ParamRefs& out) {
    for (auto& layer : layers_) layer.collect(out);
  }

 private:
  std::vector<LstmLayer> layers_;
  double dropout_ = 0.0;
};

}  // namespace ropnet

#endif  // ROPNET_LAYERS_LSTM_HPP_
