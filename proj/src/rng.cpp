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

#include "ropnet/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ropnet/errors.hpp"

namespace ropnet {

std::uint64_t SeededRng::next_u64() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SeededRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) {
  if (!(lo < hi)) {
    throw RangeError("uniform range requires lo < hi, got [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + ")");
  }
  const double v = lo + (hi - lo) * uniform();
  // Rounding can land exactly on hi when the interval is a few ulps wide.
  return v < hi ? v : std::nextafter(hi, lo);
}

double SeededRng::normal() noexcept {
  if (spare_normal_) {
    const double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::size_t SeededRng::below(std::size_t n) {
  if (n == 0) throw RangeError("below(0) has no admissible value");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = next_u64();
  while (draw >= limit) draw = next_u64();
  return static_cast<std::size_t>(draw % bound);
}

SeededRng SeededRng::split(std::uint64_t stream) const noexcept {
  SeededRng mixer(state_ ^ (stream * 0xD1B54A32D192ED03ULL));
  return SeededRng(mixer.next_u64());
}

Tensor seeded_uniform(SeededRng& rng, Shape shape, double lo, double hi) {
  if (!(lo < hi)) {
    throw RangeError("seeded_uniform requires lo < hi, got [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + ")");
  }
  Tensor out(std::move(shape));
  for (double& v : out.data()) v = rng.uniform(lo, hi);
  return out;
}

}  // namespace ropnet
