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

#include "ropnet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "ropnet/errors.hpp"

namespace ropnet {

namespace {

std::size_t checked_volume(const Shape& shape) {
  if (shape.empty() || shape.size() > 3) {
    throw DimensionError("tensor rank must be 1..3, got shape " + to_string(shape));
  }
  std::size_t n = 1;
  for (std::size_t extent : shape) {
    if (extent == 0) throw DimensionError("tensor extents must be positive, got " + to_string(shape));
    n *= extent;
  }
  return n;
}

void expect_matrix(const Tensor& t, const char* what) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(what) + " expects a rank-2 tensor, got " + to_string(t.shape()));
  }
}

}  // namespace

std::string to_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  data_.assign(checked_volume(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (checked_volume(shape_) != data_.size()) {
    throw DimensionError("data length " + std::to_string(data_.size()) + " does not match shape " +
                         to_string(shape_));
  }
}

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw DimensionError("axis " + std::to_string(axis) + " out of range for shape " + to_string(shape_));
  }
  return shape_[axis];
}

Tensor Tensor::reshaped(Shape shape) const& {
  Tensor copy = *this;
  return std::move(copy).reshaped(std::move(shape));
}

Tensor Tensor::reshaped(Shape shape) && {
  if (checked_volume(shape) != data_.size()) {
    throw DimensionError("cannot reshape " + to_string(shape_) + " to " + to_string(shape));
  }
  shape_ = std::move(shape);
  return std::move(*this);
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Tensor& Tensor::operator+=(const Tensor& other) {
  if (other.shape_ != shape_) {
    throw DimensionError("cannot add " + to_string(other.shape_) + " into " + to_string(shape_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  expect_matrix(a, "matmul");
  expect_matrix(b, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul inner extents differ: " + to_string(a.shape()) + " x " +
                         to_string(b.shape()));
  }
  Tensor c({m, n});
  const double* pa = a.raw();
  const double* pb = b.raw();
  double* pc = c.raw();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = pc + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = pa[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = pb + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  expect_matrix(a, "matmul_nt");
  expect_matrix(b, "matmul_nt");
  const std::size_t n = b.dim(0), k = b.dim(1);
  if (a.dim(1) != k) {
    throw DimensionError("matmul_nt inner extents differ: " + to_string(a.shape()) + " x " +
                         to_string(b.shape()) + "^T");
  }
  Tensor bt({k, n});
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t p = 0; p < k; ++p) bt(p, j) = b(j, p);
  return matmul(a, bt);
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
  expect_matrix(a, "matmul_tn");
  expect_matrix(b, "matmul_tn");
  const std::size_t k = a.dim(0), m = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul_tn inner extents differ: " + to_string(a.shape()) + "^T x " +
                         to_string(b.shape()));
  }
  Tensor c({m, n});
  const double* pa = a.raw();
  const double* pb = b.raw();
  double* pc = c.raw();
  for (std::size_t p = 0; p < k; ++p) {
    const double* brow = pb + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double api = pa[p * m + i];
      if (api == 0.0) continue;
      double* crow = pc + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += api * brow[j];
    }
  }
  return c;
}

void add_row_vector(Tensor& matrix, const Tensor& row) {
  expect_matrix(matrix, "add_row_vector");
  const std::size_t m = matrix.dim(0), n = matrix.dim(1);
  if (row.size() != n) {
    throw DimensionError("cannot broadcast " + to_string(row.shape()) + " over rows of " +
                         to_string(matrix.shape()));
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) matrix(i, j) += row[j];
}

Tensor column_sums(const Tensor& matrix) {
  expect_matrix(matrix, "column_sums");
  const std::size_t m = matrix.dim(0), n = matrix.dim(1);
  Tensor out({n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j] += matrix(i, j);
  return out;
}

Tensor softmax_last_axis(const Tensor& x) {
  if (x.empty()) throw DimensionError("softmax of an empty tensor");
  Tensor out = x;
  const std::size_t width = x.shape().back();
  const std::size_t rows = x.size() / width;
  for (std::size_t r = 0; r < rows; ++r) {
    double* v = out.raw() + r * width;
    const double peak = *std::max_element(v, v + width);
    double total = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      v[j] = std::exp(v[j] - peak);
      total += v[j];
    }
    for (std::size_t j = 0; j < width; ++j) v[j] /= total;
  }
  return out;
}

bool all_finite(const Tensor& x) noexcept {
  return std::all_of(x.data().begin(), x.data().end(), [](double v) { return std::isfinite(v); });
}

void expect_shape(const Tensor& x, const Shape& expected, const char* what) {
  if (x.shape() != expected) {
    throw DimensionError(std::string(what) + ": expected shape " + to_string(expected) + ", got " +
                         to_string(x.shape()));
  }
}

}  // namespace ropnet
