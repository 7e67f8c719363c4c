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

#ifndef ROPNET_LAYERS_NORM_HPP_
#define ROPNET_LAYERS_NORM_HPP_

#include <string>
#include <vector>

#include "ropnet/param.hpp"

namespace ropnet {

inline constexpr double kNormEpsilon = 1e-5;

/// Per-row normalization over the last axis of an [N x C] matrix.
class LayerNorm {
 public:
  struct Tape {
    Tensor normalized;
    std::vector<double> inv_std;
    bool recorded = false;
  };

  LayerNorm() = default;
  LayerNorm(const std::string& name, std::size_t width);

  Tensor forward(const Tensor& x, Tape* tape) const;
  Tensor backward(const Tape& tape, const Tensor& dy);
  void collect(ParamRefs& out) { out.insert(out.end(), {&gain, &bias}); }

  Param gain;
  Param bias;
  double eps = kNormEpsilon;
};

/**
 * Per-column normalization of an [N x C] matrix. Training uses the biased
 * batch variance and folds the unbiased one into the running estimate with
 * momentum 0.1; inference uses the running estimates.
 */
class BatchNorm {
 public:
  struct Tape {
    Tensor normalized;
    std::vector<double> inv_std;
    bool training = false;
    bool recorded = false;
  };

  BatchNorm() = default;
  BatchNorm(const std::string& name, std::size_t width);

  /// Throws DegenerateBatchError for a single-row batch in training mode.
  Tensor forward(const Tensor& x, Tape* tape, bool training);
  Tensor backward(const Tape& tape, const Tensor& dy);
  void collect(ParamRefs& out) {
    out.insert(out.end(), {&gain, &bias, &running_mean, &running_var});
  }

  Param gain;
  Param bias;
  Param running_mean;
  Param running_var;
  double eps = kNormEpsilon;
  double momentum = 0.1;
};

}  // namespace ropnet

#endif  // ROPNET_LAYERS_NORM_HPP_
