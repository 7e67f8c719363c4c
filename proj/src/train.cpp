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

#include "ropnet/train.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "ropnet/data_io.hpp"
#include "ropnet/errors.hpp"

namespace ropnet {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning rate must be positive");
  if (!(weight_decay >= 0.0)) throw ConfigError("train: weight decay must be non-negative");
  if (batch_size == 0) throw ConfigError("train: batch size must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("train: dropout must lie in [0, 1)");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("train: betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) throw ConfigError("train: eps must be positive");
}

MseResult mse_loss(const Tensor& pred, const Tensor& target) {
  if (pred.empty() || target.empty()) throw DataError("mse_loss on an empty batch");
  expect_shape(target, pred.shape(), "mse_loss target");
  const double n = static_cast<double>(pred.dim(0));
  MseResult out{0.0, Tensor::zeros_like(pred)};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - target[i];
    out.loss += diff * diff;
    out.grad[i] = 2.0 * diff / n;
  }
  out.loss /= n;
  return out;
}

void adamw_step(const ParamRefs& params, OptimState& state, const TrainConfig& cfg) {
  std::size_t trainable = 0;
  for (const Param* p : params) trainable += p->trainable ? 1 : 0;
  if (state.m.empty()) {
    for (const Param* p : params) {
      if (!p->trainable) continue;
      state.m.push_back(Tensor::zeros_like(p->value));
      state.v.push_back(Tensor::zeros_like(p->value));
    }
  }
  if (state.m.size() != trainable) throw ConfigError("optimizer state does not match the parameter list");
  for (const Param* p : params) {
    if (p->trainable && !all_finite(p->grad)) {
      throw DivergenceError("non-finite gradient for parameter " + p->name);
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  const double decay = 1.0 - cfg.learning_rate * cfg.weight_decay;
  std::size_t slot = 0;
  for (Param* p : params) {
    if (!p->trainable) continue;
    Tensor& m = state.m[slot];
    Tensor& v = state.v[slot];
    ++slot;
    expect_shape(m, p->value.shape(), "adamw moment");
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double g = p->grad[i];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p->value[i] = p->value[i] * decay - cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
}

namespace {

std::vector<std::vector<std::size_t>> make_batches(std::vector<std::size_t> order, std::size_t batch_size) {
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  // A one-sample batch has no batch-norm statistics; fold it into its neighbor.
  if (batches.size() > 1 && batches.back().size() == 1) {
    batches[batches.size() - 2].push_back(batches.back().front());
    batches.pop_back();
  }
  return batches;
}

}  // namespace

LossCurve train_model(Model& model, const Dataset& train, const Dataset& test, const TrainConfig& cfg,
                      const EpochHook& hook) {
  cfg.validate();
  LossCurve curve;
  if (cfg.epochs == 0) return curve;
  if (!train.labeled() || train.size() == 0) throw DataError("training set is empty or unlabeled");
  if (!test.labeled() || test.size() == 0) throw DataError("test set is empty or unlabeled");

  SeededRng root(cfg.seed);
  SeededRng shuffle_rng = root.split(101);
  SeededRng dropout_rng = root.split(202);
  OptimState opt;
  ModelTape tape;
  const ParamRefs params = model.parameters();

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[shuffle_rng.below(i + 1)]);
    const auto batches = make_batches(order, cfg.batch_size);
    double weighted_loss = 0.0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const Dataset batch = train.subset(batches[b]);
      model.zero_grad();
      const Tensor pred = model.forward(batch.windows, batch.statics, &tape, true, &dropout_rng);
      const MseResult loss = mse_loss(pred, batch.targets);
      if (!std::isfinite(loss.loss)) {
        throw DivergenceError("non-finite training loss at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(b + 1));
      }
      model.backward(tape, loss.grad);
      try {
        adamw_step(params, opt, cfg);
      } catch (const DivergenceError& e) {
        throw DivergenceError(std::string(e.what()) + " at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(b + 1));
      }
      weighted_loss += loss.loss * static_cast<double>(batches[b].size());
    }
    const double test_mse = evaluate_mse(model, test);
    if (!std::isfinite(test_mse)) {
      throw DivergenceError("non-finite test loss at epoch " + std::to_string(epoch));
    }
    curve.push_back({epoch, weighted_loss / static_cast<double>(train.size()), test_mse});
    if (hook) hook(epoch, model);
  }
  tape = ModelTape{};
  model.zero_grad();
  return curve;
}

Tensor predict_dataset(const Model& model, const Dataset& data, std::size_t chunk) {
  const std::size_t n = data.size();
  if (n == 0) throw DataError("cannot predict on an empty dataset");
  Tensor out({n, 1});
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t end = std::min(n, start + chunk);
    std::vector<std::size_t> idx(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const Dataset part = data.subset(idx);
    const Tensor pred = model.predict(part.windows, part.statics);
    for (std::size_t i = 0; i < idx.size(); ++i) out[start + i] = pred[i];
  }
  return out;
}

double evaluate_mse(const Model& model, const Dataset& data) {
  if (!data.labeled()) throw DataError("cannot evaluate an unlabeled dataset");
  return mse_loss(predict_dataset(model, data), data.targets).loss;
}

void write_loss_curve_csv(std::ostream& out, const LossCurve& curve) {
  out << "epoch,train_mse,test_mse\n";
  for (const auto& p : curve) {
    out << p.epoch << ',' << format_double(p.train_mse) << ',' << format_double(p.test_mse) << '\n';
  }
}

}  // namespace ropnet
