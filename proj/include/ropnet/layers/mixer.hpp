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

#ifndef ROPNET_LAYERS_MIXER_HPP_
#define ROPNET_LAYERS_MIXER_HPP_

#include <string>
#include <vector>

#include "ropnet/layers/linear.hpp"
#include "ropnet/layers/norm.hpp"

namespace ropnet {

enum class MixerVariant {
  /// n -> 128, four 128 -> 128 hidden layers, 128 -> 1; every layer but the
  /// last is Linear -> BatchNorm -> ReLU.
  kStandalone,
  /// n -> 128 -> 64, Linear -> ReLU each.
  kBranch,
};

/// Feed-forward mixer over a static [B x n] feature vector.
class MixerBlock {
 public:
  static constexpr std::size_t kWidth = 128;
  static constexpr std::size_t kBranchOutput = 64;
  static constexpr std::size_t kStandaloneHidden = 4;

  struct Tape {
    std::vector<Linear::Tape> linears;
    std::vector<BatchNorm::Tape> norms;
    std::vector<Tensor> activations;  // post-ReLU outputs, for the ReLU masks
    bool recorded = false;
  };

  MixerBlock() = default;
  MixerBlock(const std::string& name, MixerVariant variant, std::size_t input_width, SeededRng& rng);

  MixerVariant variant() const { return variant_; }
  std::size_t input_width() const { return linears_.front().in_features(); }
  std::size_t output_width() const { return linears_.back().out_features(); }
  const std::vector<Linear>& linears() const { return linears_; }
  std::vector<Linear>& linears() { return linears_; }
  std::vector<BatchNorm>& norms() { return norms_; }

  Tensor forward(const Tensor& x, Tape* tape, bool training);
  Tensor backward(const Tape& tape, const Tensor& dy);

  void collect(ParamRefs& out) {
    for (auto& l : linears_) l.collect(out);
    for (auto& n : norms_) n.collect(out);
  }

 private:
  MixerVariant variant_ = MixerVariant::kBranch;
  std::vector<Linear> linears_;
  std::vector<BatchNorm> norms_;
};

}  // namespace ropnet

#endif  // ROPNET_LAYERS_MIXER_HPP_
