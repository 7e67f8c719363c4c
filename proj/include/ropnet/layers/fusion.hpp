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

#ifndef ROPNET_LAYERS_FUSION_HPP_
#define ROPNET_LAYERS_FUSION_HPP_

#include <string>

#include "ropnet/layers/linear.hpp"

namespace ropnet {

/// out = W_fc concat(temporal, static) + b_fc, W_fc [1 x (d1 + d2)].
class FusionHead {
 public:
  struct Tape {
    Linear::Tape linear;
    std::size_t temporal_width = 0;
    bool recorded = false;
  };
  struct InputGrads {
    Tensor temporal;
    Tensor statics;
  };

  FusionHead() = default;
  FusionHead(const std::string& name, std::size_t temporal_width, std::size_t static_width,
             SeededRng& rng);

  std::size_t temporal_width() const { return temporal_width_; }
  std::size_t static_width() const { return linear.in_features() - temporal_width_; }

  Tensor forward(const Tensor& temporal, const Tensor& statics, Tape* tape) const;
  InputGrads backward(const Tape& tape, const Tensor& dout);

  void collect(ParamRefs& out) { linear.collect(out); }

  Linear linear;

 private:
  std::size_t temporal_width_ = 0;
};

/// Row-wise concatenation of [B x d1] and [B x d2].
Tensor concat_columns(const Tensor& left, const Tensor& right);

}  // namespace ropnet

#endif  // ROPNET_LAYERS_FUSION_HPP_
