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

#ifndef ROPNET_TRAIN_HPP_
#define ROPNET_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "ropnet/dataset.hpp"
#include "ropnet/model.hpp"

namespace ropnet {

/// Defaults: AdamW, lr 1e-3, weight decay 1e-5, batch 64, 100 epochs,
/// dropout 0.2; betas and epsilon are the AdamW reference values.
struct TrainConfig {
  double learning_rate = 1e-3;
  double weight_decay = 1e-5;
  std::size_t batch_size = 64;
  std::size_t epochs = 100;
  double dropout = 0.2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 42;

  void validate() const;
};

struct MseResult {
  double loss = 0.0;
  Tensor grad;  // d(loss)/d(pred) = 2 (pred - target) / B
};

/// Mean squared error over a [B x 1] batch. Throws DataError for B == 0
/// and DimensionError for mismatched shapes.
MseResult mse_loss(const Tensor& pred, const Tensor& target);

/// First/second moment estimates, one pair per trainable parameter.
struct OptimState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::uint64_t step = 0;
};

/**
 * One AdamW update on every trainable parameter:
 *   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
 *   theta <- theta - lr * m_hat / (sqrt(v_hat) + eps) - lr * wd * theta
 * The decay term is applied to the parameter directly, never through g.
 * Throws DivergenceError if any gradient is non-finite.
 */
void adamw_step(const ParamRefs& params, OptimState& state, const TrainConfig& cfg);

struct LossPoint {
  std::size_t epoch = 0;
  double train_mse = 0.0;
  double test_mse = 0.0;
};
using LossCurve = std::vector<LossPoint>;

/// Called after every epoch with the epoch number (1-based).
using EpochHook = std::function<void(std::size_t epoch, const Model& model)>;

/**
 * Mini-batch training without early stopping. Each epoch reshuffles the
 * training samples with a seeded generator, trains on every batch (a
 * trailing batch of one sample is merged into the previous batch), and
 * records the sample-weighted mean training loss plus the inference-mode
 * test loss. Throws DivergenceError with epoch/batch coordinates on a
 * non-finite loss.
 */
LossCurve train_model(Model& model, const Dataset& train, const Dataset& test, const TrainConfig& cfg,
                      const EpochHook& hook = {});

/// Inference-mode predictions [M x 1], evaluated in chunks.
Tensor predict_dataset(const Model& model, const Dataset& data, std::size_t chunk = 256);
/// Inference-mode MSE on scaled targets.
double evaluate_mse(const Model& model, const Dataset& data);

/// `epoch,train_mse,test_mse` with round-trip-exact numbers.
void write_loss_curve_csv(std::ostream& out, const LossCurve& curve);

}  // namespace ropnet

#endif  // ROPNET_TRAIN_HPP_
