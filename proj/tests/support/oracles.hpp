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

// Explicit-loop reference implementations and a finite-difference checker.
// Nothing here calls the library's layer code; only Tensor is shared as a
// container.
#ifndef ROPNET_TESTS_ORACLES_HPP_
#define ROPNET_TESTS_ORACLES_HPP_

#include <functional>
#include <string>
#include <vector>

#include "ropnet/layers/attention_pool.hpp"
#include "ropnet/layers/fusion.hpp"
#include "ropnet/layers/lstm.hpp"
#include "ropnet/layers/mixer.hpp"
#include "ropnet/layers/norm.hpp"
#include "ropnet/layers/transformer.hpp"
#include "ropnet/param.hpp"
#include "ropnet/rng.hpp"
#include "ropnet/tensor.hpp"

namespace oracle {

using ropnet::Tensor;

Tensor random_tensor(ropnet::SeededRng& rng, const ropnet::Shape& shape, double scale = 1.0);
double max_abs_diff(const Tensor& a, const Tensor& b);

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);
Tensor softmax_rows(const Tensor& x);

/// One LSTM layer, gate by gate and unit by unit.
Tensor lstm_layer(const ropnet::LstmLayer& layer, const Tensor& x);
Tensor lstm_stack(const ropnet::LstmStack& stack, const Tensor& x);

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps);
/// Training-mode batch norm on [N x C].
Tensor batch_norm_train(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps);
Tensor batch_norm_eval(const ropnet::BatchNorm& bn, const Tensor& x);

Tensor transformer(const ropnet::TransformerEncoderBlock& block, const Tensor& h);
Tensor mixer(const ropnet::MixerBlock& block, const Tensor& x, bool training);
Tensor attention_pool(const ropnet::AttentionPool& pool, const Tensor& y);
Tensor fusion(const ropnet::FusionHead& head, const Tensor& temporal, const Tensor& statics);

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  /// Coordinates whose +h / -h evaluations saw different ReLU patterns.
  std::size_t skipped = 0;
  /// Coordinates whose h-step estimate had not converged and were compared
  /// against the Richardson extrapolation of the h and h/2 estimates.
  std::size_t refined = 0;
  std::string worst;
};

/// Fingerprint of the piecewise-linear region a forward pass landed in.
using Signature = std::function<std::vector<bool>()>;

/// Relative error with an absolute floor: |a - n| / max(|a|, |n|, floor).
inline constexpr double kRelFloor = 1e-3;

/**
 * Compares the analytic gradients already stored in each Param's `grad`
 * against central differences of `loss`. At most `max_entries` coordinates
 * per parameter are probed (chosen by `rng`); all coordinates when the
 * parameter is smaller. When `signature` is given it is read after each
 * loss evaluation; a coordinate whose two probes land in different ReLU
 * regions has no central difference and is skipped. When a coordinate misses
 * `tolerance` and the truncation error of the h estimate, 4/3 |n(h) - n(h/2)|,
 * is at least half the tolerance, it is compared against the Richardson value
 * (4 n(h/2) - n(h)) / 3 instead.
 */
GradCheck check_gradients(const std::vector<ropnet::Param*>& params, const std::function<double()>& loss,
                          std::size_t max_entries, ropnet::SeededRng& rng, double h = 1e-5,
                          const Signature& signature = {}, double tolerance = 1e-6);

/// Positive-entry mask of every tensor in `tensors`.
std::vector<bool> positive_mask(const std::vector<const Tensor*>& tensors);

/// sum(y * r): a loss whose gradient with respect to y is r.
double projection(const Tensor& y, const Tensor& r);

}  // namespace oracle

#endif  // ROPNET_TESTS_ORACLES_HPP_
