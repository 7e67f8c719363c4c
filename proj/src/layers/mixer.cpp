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

#include "ropnet/layers/mixer.hpp"

#include "ropnet/errors.hpp"

namespace ropnet {

MixerBlock::MixerBlock(const std::string& name, MixerVariant variant, std::size_t input_width,
                       SeededRng& rng)
    : variant_(variant) {
  if (input_width == 0) throw ConfigError(name + ": mixer input width must be positive");
  if (variant == MixerVariant::kBranch) {
    linears_.emplace_back(name + ".linear0", input_width, kWidth, rng);
    linears_.emplace_back(name + ".linear1", kWidth, kBranchOutput, rng);
    return;
  }
  linears_.emplace_back(name + ".linear0", input_width, kWidth, rng);
  norms_.emplace_back(name + ".bn0", kWidth);
  for (std::size_t i = 1; i <= kStandaloneHidden; ++i) {
    linears_.emplace_back(name + ".linear" + std::to_string(i), kWidth, kWidth, rng);
    norms_.emplace_back(name + ".bn" + std::to_string(i), kWidth);
  }
  linears_.emplace_back(name + ".linear" + std::to_string(kStandaloneHidden + 1), kWidth, 1, rng);
}

Tensor MixerBlock::forward(const Tensor& x, Tape* tape, bool training) {
  if (tape) {
    tape->linears.assign(linears_.size(), {});
    tape->norms.assign(norms_.size(), {});
    tape->activations.clear();
  }
  const bool standalone = variant_ == MixerVariant::kStandalone;
  const std::size_t activated = standalone ? linears_.size() - 1 : linears_.size();
  Tensor h = x;
  for (std::size_t i = 0; i < linears_.size(); ++i) {
    h = linears_[i].forward(h, tape ? &tape->linears[i] : nullptr);
    if (i >= activated) break;
    if (standalone) h = norms_[i].forward(h, tape ? &tape->norms[i] : nullptr, training);
    for (double& v : h.data()) v = v > 0.0 ? v : 0.0;
    if (tape) tape->activations.push_back(h);
  }
  if (tape) tape->recorded = true;
  return h;
}

Tensor MixerBlock::backward(const Tape& tape, const Tensor& dy) {
  if (!tape.recorded) throw TapeError("MixerBlock: backward without a recorded forward pass");
  const bool standalone = variant_ == MixerVariant::kStandalone;
  const std::size_t activated = tape.activations.size();
  Tensor grad = dy;
  for (std::size_t i = linears_.size(); i-- > 0;) {
    if (i < activated) {
      const Tensor& out = tape.activations[i];
      expect_shape(grad, out.shape(), "MixerBlock::backward");
      for (std::size_t j = 0; j < grad.size(); ++j) {
        if (out[j] <= 0.0) grad[j] = 0.0;
      }
      if (standalone) grad = norms_[i].backward(tape.norms[i], grad);
    }
    grad = linears_[i].backward(tape.linears[i], grad);
  }
  return grad;
}

}  // namespace ropnet
