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

#ifndef ROPNET_EXPLAIN_HPP_
#define ROPNET_EXPLAIN_HPP_

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ropnet/dataset.hpp"
#include "ropnet/model.hpp"
#include "ropnet/rng.hpp"

namespace ropnet {

/// Maps (windows [B x L x D], statics [B x D]) to predictions [B x 1].
using BatchPredictor = std::function<Tensor(const Tensor& windows, const Tensor& statics)>;

BatchPredictor predictor_for(const Model& model);

struct FeatureImportance {
  std::string feature;
  double importance = 0.0;
  std::size_t rank = 0;
};

struct ImportanceReport {
  double base_mse = 0.0;
  std::size_t repeats = 0;
  std::vector<FeatureImportance> features;  // input-column order

  nlohmann::json to_json() const;
  /// `feature,importance,rank`, rows in rank order.
  void write_csv(std::ostream& out) const;
};

/// MSE after giving every sample the values of `feature` (across all window
/// steps and the static vector) from sample perm[i].
double permuted_mse(const BatchPredictor& predict, const Dataset& data, std::size_t feature,
                    std::span<const std::size_t> perm, double mse_scale = 1.0);

/**
 * Mean increase in MSE over `repeats` random permutations of each feature.
 * `mse_scale` converts scaled-target MSE to original units (target_sigma^2).
 * Ranks are 1 for the largest increase. Throws DataError for fewer than two
 * samples and ConfigError for repeats < 3.
 */
ImportanceReport permutation_importance(const BatchPredictor& predict, const Dataset& data,
                                        const std::vector<std::string>& names, SeededRng& rng,
                                        std::size_t repeats, double mse_scale = 1.0);

/// A scalar function of one feature vector.
using PointPredictor = std::function<double(std::span<const double>)>;

/// Prediction as a function of sample `index`'s last-step feature vector,
/// earlier window rows held fixed.
PointPredictor last_step_predictor(const Model& model, const Dataset& data, std::size_t index);

struct LocalSurrogate {
  std::vector<double> anchor;
  double radius = 0.0;
  std::size_t samples = 0;
  std::vector<double> weights;
  double intercept = 0.0;
  double fit_r2 = 0.0;

  nlohmann::json to_json(const std::vector<std::string>& names) const;
};

/// Smallest reciprocal condition number accepted for the weighted normal
/// equations before the neighborhood is declared degenerate.
inline constexpr double kSurrogateMinRcond = 1e-12;

/**
 * Weighted linear fit around `anchor`: draws anchor + N(0, radius^2 I)
 * points, weights each by exp(-|d|^2 / radius^2), and solves weighted least
 * squares for an intercept plus one weight per feature. Throws RangeError
 * for radius <= 0 or n_samples < 50 and DegenerateNeighborhoodError when the
 * normal equations are too ill-conditioned.
 */
LocalSurrogate local_surrogate(const PointPredictor& predict, std::span<const double> anchor, double radius,
                               std::size_t n_samples, SeededRng& rng);

}  // namespace ropnet

#endif  // ROPNET_EXPLAIN_HPP_
