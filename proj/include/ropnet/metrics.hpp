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

#ifndef ROPNET_METRICS_HPP_
#define ROPNET_METRICS_HPP_

#include <span>

#include "json.hpp"

namespace ropnet {

/// Rows whose |actual| falls below this are left out of MAPE.
inline constexpr double kMapeFloor = 1e-8;

struct MetricsReport {
  double r2 = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
  double mape = 0.0;  // percent
  std::size_t n = 0;
  std::size_t mape_excluded = 0;

  nlohmann::json to_json() const;
};

/**
 * R^2, MAE, RMSE and MAPE (percent) of `predicted` against `actual`, both in
 * original target units. Throws DataError when n < 2, the lengths differ,
 * the actuals are constant (R^2 undefined) or every actual is below the
 * MAPE floor.
 */
MetricsReport compute_metrics(std::span<const double> actual, std::span<const double> predicted);

}  // namespace ropnet

#endif  // ROPNET_METRICS_HPP_
