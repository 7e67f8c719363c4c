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

#ifndef ROPNET_DATASET_HPP_
#define ROPNET_DATASET_HPP_

#include <span>

#include "ropnet/tensor.hpp"

namespace ropnet {

/// Model-ready samples: windows [M x L x D], statics [M x D] (each window's
/// last row) and scaled targets [M x 1] (empty when unlabeled).
struct Dataset {
  Tensor windows;
  Tensor statics;
  Tensor targets;

  std::size_t size() const { return windows.empty() ? 0 : windows.dim(0); }
  std::size_t window_len() const { return windows.dim(1); }
  std::size_t features() const { return windows.dim(2); }
  bool labeled() const { return !targets.empty(); }

  /// Samples at `indices`, in that order.
  Dataset subset(std::span<const std::size_t> indices) const;
};

}  // namespace ropnet

#endif  // ROPNET_DATASET_HPP_
