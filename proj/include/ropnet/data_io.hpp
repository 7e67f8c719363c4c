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

#ifndef ROPNET_DATA_IO_HPP_
#define ROPNET_DATA_IO_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

namespace ropnet {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

enum class FeatureKind { kContinuous, kCategorical, kTarget };

struct FeatureDescriptor {
  std::string name;
  std::string unit;
  FeatureKind kind = FeatureKind::kContinuous;
};

/// Ordered column descriptors with exactly one target.
struct DatasetSchema {
  std::vector<FeatureDescriptor> features;

  /// WOB, RPM, Torque, Standpipe Pressure, Flow Rate, Hook Load, Bit Depth,
  /// Hole Depth (continuous) and ROP (target, ft/hr).
  static DatasetSchema drilling_default();

  /// Throws ConfigError unless names are unique and exactly one target exists.
  void validate() const;
  const FeatureDescriptor& target() const;
  std::vector<std::string> names(FeatureKind kind) const;
};

/// Column-major table. Missing numeric cells are NaN, missing categorical
/// cells are empty strings. `target` is empty when the source had no target.
struct RawTable {
  std::vector<std::string> numeric_names;
  std::vector<std::vector<double>> numeric;
  std::vector<std::string> categorical_names;
  std::vector<std::vector<std::string>> categorical;
  std::string target_name;
  std::vector<double> target;

  std::size_t rows() const;
  bool has_target() const { return !target.empty(); }
  /// Numeric column (or the target) by name; throws DataError if absent.
  const std::vector<double>& numeric_column(const std::string& name) const;
};

struct LoadResult {
  RawTable table;
  std::vector<std::string> warnings;
};

/**
 * Reads a headed, comma-separated file. Quoted fields are supported; "\n" and
 * "\r\n" line endings both work. Empty cells and the literal "NaN" are
 * missing. Columns outside the schema are dropped with a warning. A missing
 * target column is a DataError when `require_target` is set.
 */
LoadResult read_csv(std::istream& in, const DatasetSchema& schema, bool require_target = true);
LoadResult load_csv(const std::filesystem::path& path, const DatasetSchema& schema,
                    bool require_target = true);

/// Numeric columns first, then categorical, then the target. Doubles use the
/// shortest representation that round-trips exactly.
void write_csv(std::ostream& out, const RawTable& table);
void save_csv(const std::filesystem::path& path, const RawTable& table);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/**
 * Parameters of the synthetic drilling generator. Coefficients act on
 * standardized feature units u = (x - center) / scale of the eight default
 * inputs, in schema order:
 *
 *   ROP_t = intercept + static . u_t + lag1 . u_{t-1} + lag2 . u_{t-2}
 *           + regime_offset[r_t] + N(0, noise_sigma^2)
 */
struct SyntheticSpec {
  std::size_t n_rows = 2000;
  double noise_sigma = 1.2;
  std::size_t regime_count = 4;
  std::vector<double> static_coeffs;
  std::vector<double> lag1_coeffs;
  std::vector<double> lag2_coeffs;
  double intercept = 60.0;
  double regime_offset_scale = 3.0;
  double regime_shift_scale = 0.75;
  double ar_coefficient = 0.5;
  double cross_correlation = 0.4;
  double missing_fraction = 0.0;
  std::uint64_t seed = 42;

  /// The benchmark used throughout the tests: 2,000 rows, lagged signal,
  /// four regimes, noise chosen so the Bayes-optimal R^2 is about 0.99.
  static SyntheticSpec drilling_default();
  /// y = coefficient * u_feature + noise; no lags, no regime offsets.
  static SyntheticSpec single_signal(std::size_t feature, double coefficient, double noise_sigma);

  /// Throws ConfigError for an invalid combination.
  void validate() const;
};

struct GroundTruth {
  SyntheticSpec spec;
  std::vector<std::string> feature_names;
  std::vector<double> centers;
  std::vector<double> scales;
  std::vector<double> regime_offsets;
  std::vector<std::size_t> regime_starts;
  /// Noise-free target per emitted row.
  std::vector<double> noiseless_target;

  /// noise_sigma^2, the irreducible MSE.
  double bayes_mse() const { return spec.noise_sigma * spec.noise_sigma; }
  nlohmann::json to_json() const;
};

struct SyntheticData {
  RawTable table;
  GroundTruth truth;
};

/// Deterministic in `spec.seed`. Throws ConfigError if n_rows < 100.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace ropnet

#endif  // ROPNET_DATA_IO_HPP_
