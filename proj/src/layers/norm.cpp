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

#include "ropnet/layers/norm.hpp"

#include <cmath>

#include "ropnet/errors.hpp"

namespace ropnet {

namespace {

void expect_width(const Tensor& x, std::size_t width, const std::string& name) {
  if (x.rank() != 2 || x.dim(1) != width) {
    throw DimensionError(name + ": expected [N x " + std::to_string(width) + "], got " +
                         to_string(x.shape()));
  }
}

}  // namespace

LayerNorm::LayerNorm(const std::string& name, std::size_t width)
    : gain(name + ".gain", Tensor({width}, 1.0)), bias(name + ".bias", Tensor({width})) {}

Tensor LayerNorm::forward(const Tensor& x, Tape* tape) const {
  expect_width(x, gain.value.size(), gain.name);
  const std::size_t rows = x.dim(0), width = x.dim(1);
  Tensor normalized = Tensor::zeros_like(x);
  std::vector<double> inv_std(rows);
  Tensor y = Tensor::zeros_like(x);
  for (std::size_t r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < width; ++c) mean += x(r, c);
    mean /= static_cast<double>(width);
    double var = 0.0;
    for (std::size_t c = 0; c < width; ++c) var += (x(r, c) - mean) * (x(r, c) - mean);
    var /= static_cast<double>(width);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < width; ++c) {
      normalized(r, c) = (x(r, c) - mean) * inv_std[r];
      y(r, c) = gain.value[c] * normalized(r, c) + bias.value[c];
    }
  }
  if (tape) {
    tape->normalized = std::move(normalized);
    tape->inv_std = std::move(inv_std);
    tape->recorded = true;
  }
  return y;
}

Tensor LayerNorm::backward(const Tape& tape, const Tensor& dy) {
  if (!tape.recorded) throw TapeError(gain.name + ": backward without a recorded forward pass");
  expect_shape(dy, tape.normalized.shape(), "LayerNorm::backward");
  const std::size_t rows = dy.dim(0), width = dy.dim(1);
  const double n = static_cast<double>(width);
  Tensor dx = Tensor::zeros_like(dy);
  for (std::size_t r = 0; r < rows; ++r) {
    double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
    for (std::size_t c = 0; c < width; ++c) {
      const double xhat = tape.normalized(r, c);
      const double dxhat = dy(r, c) * gain.value[c];
      gain.grad[c] += dy(r, c) * xhat;
      bias.grad[c] += dy(r, c);
      sum_dxhat += dxhat;
      sum_dxhat_xhat += dxhat * xhat;
    }
    for (std::size_t c = 0; c < width; ++c) {
      const double dxhat = dy(r, c) * gain.value[c];
      dx(r, c) = tape.inv_std[r] / n * (n * dxhat - sum_dxhat - tape.normalized(r, c) * sum_dxhat_xhat);
    }
  }
  return dx;
}

BatchNorm::BatchNorm(const std::string& name, std::size_t width)
    : gain(name + ".gain", Tensor({width}, 1.0)),
      bias(name + ".bias", Tensor({width})),
      running_mean(name + ".running_mean", Tensor({width}), false),
      running_var(name + ".running_var", Tensor({width}, 1.0), false) {}

Tensor BatchNorm::forward(const Tensor& x, Tape* tape, bool training) {
  expect_width(x, gain.value.size(), gain.name);
  const std::size_t rows = x.dim(0), width = x.dim(1);
  if (training && rows < 2) {
    throw DegenerateBatchError(gain.name + ": batch statistics need at least 2 rows in training mode");
  }
  Tensor normalized = Tensor::zeros_like(x);
  std::vector<double> inv_std(width);
  for (std::size_t c = 0; c < width; ++c) {
    double mean = 0.0, var = 0.0;
    if (training) {
      for (std::size_t r = 0; r < rows; ++r) mean += x(r, c);
      mean /= static_cast<double>(rows);
      for (std::size_t r = 0; r < rows; ++r) var += (x(r, c) - mean) * (x(r, c) - mean);
      const double unbiased = var / static_cast<double>(rows - 1);
      var /= static_cast<double>(rows);
      running_mean.value[c] = (1.0 - momentum) * running_mean.value[c] + momentum * mean;
      running_var.value[c] = (1.0 - momentum) * running_var.value[c] + momentum * unbiased;
    } else {
      mean = running_mean.value[c];
      var = running_var.value[c];
    }
    inv_std[c] = 1.0 / std::sqrt(var + eps);
    for (std::size_t r = 0; r < rows; ++r) normalized(r, c) = (x(r, c) - mean) * inv_std[c];
  }
  Tensor y = Tensor::zeros_like(x);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < width; ++c)
      y(r, c) = gain.value[c] * normalized(r, c) + bias.value[c];
  if (tape) {
    tape->normalized = std::move(normalized);
    tape->inv_std = std::move(inv_std);
    tape->training = training;
    tape->recorded = true;
  }
  return y;
}

Tensor BatchNorm::backward(const Tape& tape, const Tensor& dy) {
  if (!tape.recorded) throw TapeError(gain.name + ": backward without a recorded forward pass");
  expect_shape(dy, tape.normalized.shape(), "BatchNorm::backward");
  const std::size_t rows = dy.dim(0), width = dy.dim(1);
  const double n = static_cast<double>(rows);
  Tensor dx = Tensor::zeros_like(dy);
  for (std::size_t c = 0; c < width; ++c) {
    double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double xhat = tape.normalized(r, c);
      gain.grad[c] += dy(r, c) * xhat;
      bias.grad[c] += dy(r, c);
      const double dxhat = dy(r, c) * gain.value[c];
      sum_dxhat += dxhat;
      sum_dxhat_xhat += dxhat * xhat;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      const double dxhat = dy(r, c) * gain.value[c];
      dx(r, c) = tape.training
                     ? tape.inv_std[c] / n * (n * dxhat - sum_dxhat - tape.normalized(r, c) * sum_dxhat_xhat)
                     : tape.inv_std[c] * dxhat;
    }
  }
  return dx;
}

}  // namespace ropnet
