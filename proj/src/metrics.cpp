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

#include "ropnet/metrics.hpp"

#include <cmath>

#include "ropnet/errors.hpp"

namespace ropnet {

nlohmann::json MetricsReport::to_json() const {
  return {{"r2", r2}, {"mae", mae}, {"rmse", rmse}, {"mape_pct", mape}, {"n", n}, {"mape_excluded", mape_excluded}};
}

MetricsReport compute_metrics(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw DataError("metrics: " + std::to_string(actual.size()) + " actuals vs " +
                    std::to_string(predicted.size()) + " predictions");
  }
  const std::size_t n = actual.size();
  if (n < 2) throw DataError("metrics need at least 2 samples");

  double mean = 0.0;
  for (double y : actual) mean += y;
  mean /= static_cast<double>(n);

  double ss_res = 0.0, ss_tot = 0.0, abs_sum = 0.0, pct_sum = 0.0;
  std::size_t pct_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double err = actual[i] - predicted[i];
    ss_res += err * err;
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
    abs_sum += std::abs(err);
    if (std::abs(actual[i]) >= kMapeFloor) {
      pct_sum += std::abs(err / actual[i]);
      ++pct_count;
    }
  }
  if (ss_tot == 0.0) throw DataError("R^2 is undefined for constant actual values");
  if (pct_count == 0) throw DataError("MAPE is undefined: every actual value is near zero");

  MetricsReport report;
  report.n = n;
  report.r2 = 1.0 - ss_res / ss_tot;
  report.mae = abs_sum / static_cast<double>(n);
  report.rmse = std::sqrt(ss_res / static_cast<double>(n));
  report.mape = 100.0 * pct_sum / static_cast<double>(pct_count);
  report.mape_excluded = n - pct_count;
  return report;
}

}  // namespace ropnet
