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

#ifndef ROPNET_PREPROCESS_HPP_
#define ROPNET_PREPROCESS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ropnet/data_io.hpp"
#include "ropnet/dataset.hpp"

namespace ropnet {

// ---- Mean imputation -------------------------------------------------------

struct ImputationReport {
  struct Entry {
    std::string column;
    double missing_fraction = 0.0;
    double fill_value = 0.0;
  };
  std::vector<Entry> columns;

  nlohmann::json to_json() const;
};

struct ImputationResult {
  std::vector<std::vector<double>> columns;
  ImputationReport report;
};

/// Replaces missing cells with the mean of the present cells in each column.
/// Throws DataError for a column with no present value.
ImputationResult impute_mean(const std::vector<std::vector<double>>& columns,
                             const std::vector<std::string>& names);

/// Means over `rows` only (the training rows), ignoring missing cells.
std::vector<double> fit_column_means(const std::vector<std::vector<double>>& columns,
                                     const std::vector<std::string>& names,
                                     std::span<const std::size_t> rows);

// ---- Standardization -------------------------------------------------------

/// Per-column (x - mu) / sigma with the population standard deviation.
struct ColumnScaler {
  std::vector<double> mu;
  std::vector<double> sigma;
};

/// Fits on an [N x D] matrix. Throws DataError naming any constant column.
ColumnScaler fit_scaler(const Tensor& matrix, const std::vector<std::string>& names);
Tensor apply_scaler(const ColumnScaler& scaler, const Tensor& matrix);
Tensor inverse_scaler(const ColumnScaler& scaler, const Tensor& matrix);

// ---- Categorical encoding --------------------------------------------------

/// Sorted distinct non-empty values at `rows`.
std::vector<std::string> fit_vocab(const std::vector<std::string>& column,
                                   std::span<const std::size_t> rows);

struct OneHotBlock {
  Tensor block;              // [N x |vocab|]
  std::size_t unseen = 0;    // rows encoded as all zeros
};

/// One column per vocabulary entry, in vocabulary order. Values outside the
/// vocabulary (and missing values) become all-zero rows and are counted.
/// Throws DataError for an empty vocabulary.
OneHotBlock one_hot_encode(const std::vector<std::string>& column,
                           const std::vector<std::string>& vocab);

// ---- Outlier diagnostics ---------------------------------------------------

struct OutlierReport {
  double q1 = 0.0;
  double q3 = 0.0;
  double lower_fence = 0.0;
  double upper_fence = 0.0;
  std::vector<std::size_t> flagged_rows;

  nlohmann::json to_json() const;
};

/// Linear-interpolation quantile of sorted data (numpy's default rule).
double linear_quantile(std::span<const double> sorted, double q);

/// Flags values outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR]; never changes data.
/// Throws DataError for fewer than 4 values.
OutlierReport iqr_outlier_report(std::span<const double> column);

// ---- Derived features ------------------------------------------------------

inline constexpr const char* kSpecificEnergyRatio = "Specific Energy Ratio";
inline constexpr const char* kHydraulicHorsepower = "Hydraulic Horsepower";

/**
 * Appends Specific Energy Ratio = Torque * RPM / (WOB * ROP) and
 * Hydraulic Horsepower = Flow Rate * Standpipe Pressure / 1714 as numeric
 * columns. Zero or missing denominators (and missing inputs) yield missing
 * cells. Throws DataError if a required column is absent.
 */
void derive_features(RawTable& table);

// ---- Split and windows -----------------------------------------------------

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 42;
};

/// Seeded shuffle, first round(0.8 N) indices train, rest test; both lists
/// returned sorted. Throws DataError for N < 5.
SplitIndices split_train_test(std::size_t n, std::uint64_t seed = 42);

struct Windows {
  Tensor windows;  // [M x L x D]
  Tensor statics;  // [M x D]
  Tensor targets;  // [M x 1], empty when no targets were given
};

/// M = N - L + 1 sliding windows over depth-ordered rows; sample i covers
/// rows i .. i+L-1 and takes the target of its last row.
/// Throws DataError if L == 0 or L > N.
Windows make_windows(const Tensor& matrix, std::span<const double> targets, std::size_t window_len);

// ---- Full pipeline ---------------------------------------------------------

/// Everything needed to map raw rows onto model inputs and back.
struct PreprocessorState {
  std::vector<std::string> numeric_features;
  std::vector<double> feature_means;
  ColumnScaler scaler;
  std::vector<std::string> categorical_features;
  std::vector<std::vector<std::string>> category_vocab;
  std::string target_name;
  double target_mu = 0.0;
  double target_sigma = 1.0;
  bool derived_features = false;

  /// Model input column names: numeric columns, then "column=value" one-hots.
  std::vector<std::string> input_names() const;
  std::size_t input_width() const { return input_names().size(); }

  double scale_target(double y) const { return (y - target_mu) / target_sigma; }
  double unscale_target(double y) const { return y * target_sigma + target_mu; }

  nlohmann::json to_json() const;
  static PreprocessorState from_json(const nlohmann::json& j);
};

/// Scaled predictions back to original target units.
std::vector<double> inverse_target(const PreprocessorState& state, std::span<const double> scaled);

struct PipelineOptions {
  std::size_t window_len = 1;
  std::uint64_t split_seed = 42;
  bool derived_features = false;
};

struct PreparedData {
  PreprocessorState state;
  Dataset train;
  Dataset test;
  SplitIndices split;          // over window indices
  std::vector<std::size_t> sample_rows;  // table row of each window's last step
  ImputationReport imputation;
  std::map<std::string, OutlierReport> outliers;
  std::vector<std::string> warnings;
};

/**
 * The full pipeline on a depth-ordered table:
 *   drop unlabeled rows, optional derived features, window the rows, split the
 *   window indices 80/20, fit imputation means, feature scaler, vocabularies
 *   and target scaler on the rows covered by training windows, then transform
 *   every row and assemble the tensors.
 */
PreparedData prepare_dataset(const RawTable& table, const PipelineOptions& options);

struct TransformedData {
  Dataset data;
  std::vector<std::size_t> sample_rows;
  std::vector<std::string> warnings;
};

/// Applies a fitted state to new rows (targets scaled when present).
/// Throws DataError when a fitted column is missing from the table.
TransformedData transform_table(const PreprocessorState& state, const RawTable& table,
                                std::size_t window_len);

}  // namespace ropnet

#endif  // ROPNET_PREPROCESS_HPP_
