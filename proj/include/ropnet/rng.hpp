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

#ifndef ROPNET_RNG_HPP_
#define ROPNET_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>

#include "ropnet/tensor.hpp"

namespace ropnet {

/**
 * SplitMix64 generator (Steele, Lea & Flood). The state advances by the
 * golden-ratio increment and each output is the standard 64-bit finalizer,
 * so streams are identical on every platform and compiler.
 *
 * Gaussian draws use the Box-Muller transform on two uniforms; the second
 * variate is cached.
 */
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform in [lo, hi); throws RangeError unless lo < hi.
  double uniform(double lo, double hi);
  double normal() noexcept;
  /// Uniform integer in [0, n), rejection-sampled without modulo bias.
  std::size_t below(std::size_t n);

  /// Independent child stream; does not advance this generator.
  SeededRng split(std::uint64_t stream) const noexcept;

 private:
  std::uint64_t state_;
  std::optional<double> spare_normal_;
};

Tensor seeded_uniform(SeededRng& rng, Shape shape, double lo, double hi);

}  // namespace ropnet

#endif  // ROPNET_RNG_HPP_
