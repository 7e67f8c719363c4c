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

#ifndef ROPNET_TENSOR_HPP_
#define ROPNET_TENSOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ropnet {

using Shape = std::vector<std::size_t>;

std::string to_string(const Shape& shape);

/**
 * Dense row-major array of doubles with rank 1, 2 or 3.
 *
 * A default-constructed tensor is empty (rank 0) and only serves as an unset
 * placeholder; every constructed tensor has 1-3 strictly positive extents.
 */
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  double* raw() noexcept { return data_.data(); }
  const double* raw() const noexcept { return data_.data(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * shape_[1] + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * shape_[1] + j];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  /// Same data viewed under a new shape with an equal element count.
  Tensor reshaped(Shape shape) const&;
  Tensor reshaped(Shape shape) &&;

  void fill(double value);
  Tensor& operator+=(const Tensor& other);
  Tensor& operator*=(double scale);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// c = a * b for a [m x k], b [k x n].
Tensor matmul(const Tensor& a, const Tensor& b);
/// c = a * b^T for a [m x k], b [n x k].
Tensor matmul_nt(const Tensor& a, const Tensor& b);
/// c = a^T * b for a [k x m], b [k x n].
Tensor matmul_tn(const Tensor& a, const Tensor& b);

/// Adds a length-n vector to every row of an [m x n] matrix.
void add_row_vector(Tensor& matrix, const Tensor& row);
/// Column sums of an [m x n] matrix as a length-n vector.
Tensor column_sums(const Tensor& matrix);

/// Softmax over the last axis, max-subtracted.
Tensor softmax_last_axis(const Tensor& x);

bool all_finite(const Tensor& x) noexcept;

/// Throws DimensionError unless `x` has exactly `expected` shape.
void expect_shape(const Tensor& x, const Shape& expected, const char* what);

}  // namespace ropnet

#endif  // ROPNET_TENSOR_HPP_
