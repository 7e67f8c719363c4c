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

#include "ropnet/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ropnet/errors.hpp"
#include "ropnet/rng.hpp"

namespace ropnet {

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  if (indices.empty()) throw DataError("dataset subset must select at least one sample");
  const std::size_t steps = window_len(), width = features();
  Dataset out{Tensor({indices.size(), steps, width}), Tensor({indices.size(), width}), {}};
  if (labeled()) out.targets = Tensor({indices.size(), 1});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t src = indices[i];
    if (src >= size()) throw DataError("dataset subset index out of range");
    std::copy_n(windows.raw() + src * steps * width, steps * width, out.windows.raw() + i * steps * width);
    std::copy_n(statics.raw() + src * width, width, out.statics.raw() + i * width);
    if (labeled()) out.targets[i] = targets[src];
  }
  return out;
}

nlohmann::json ImputationReport::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& e : columns) {
    j[e.column] = {{"missing_fraction", e.missing_fraction}, {"fill_value", e.fill_value}};
  }
  return j;
}

ImputationResult impute_mean(const std::vector<std::vector<double>>& columns,
                             const std::vector<std::string>& names) {
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  std::vector<std::size_t> all(rows);
  for (std::size_t i = 0; i < rows; ++i) all[i] = i;
  const std::vector<double> means = fit_column_means(columns, names, all);
  ImputationResult result{columns, {}};
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::size_t missing = 0;
    for (double& v : result.columns[c]) {
      if (is_missing(v)) {
        v = means[c];
        ++missing;
      }
    }
    result.report.columns.push_back(
        {names[c], rows ? static_cast<double>(missing) / static_cast<double>(rows) : 0.0, means[c]});
  }
  return result;
}

std::vector<double> fit_column_means(const std::vector<std::vector<double>>& columns,
                                     const std::vector<std::string>& names,
                                     std::span<const std::size_t> rows) {
  std::vector<double> means(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    double total = 0.0;
    std::size_t present = 0;
    for (std::size_t r : rows) {
      const double v = columns[c].at(r);
      if (!is_missing(v)) {
        total += v;
        ++present;
      }
    }
    if (present == 0) {
      throw DataError("column \"" + names.at(c) + "\" has no present values to impute from");
    }
    means[c] = total / static_cast<double>(present);
  }
  return means;
}

ColumnScaler fit_scaler(const Tensor& matrix, const std::vector<std::string>& names) {
  if (matrix.rank() != 2) throw DimensionError("fit_scaler expects an [N x D] matrix");
  const std::size_t rows = matrix.dim(0), cols = matrix.dim(1);
  ColumnScaler scaler{std::vector<double>(cols), std::vector<double>(cols)};
  for (std::size_t c = 0; c < cols; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < rows; ++r) mean += matrix(r, c);
    mean /= static_cast<double>(rows);
    double var = 0.0;
    for (std::size_t r = 0; r < rows; ++r) var += (matrix(r, c) - mean) * (matrix(r, c) - mean);
    var /= static_cast<double>(rows);
    const double sigma = std::sqrt(var);
    if (!(sigma > 1e-12 * std::max(1.0, std::abs(mean)))) {
      const std::string name = c < names.size() ? names[c] : "#" + std::to_string(c);
      throw DataError("column \"" + name + "\" is constant on the training rows and cannot be scaled");
    }
    scaler.mu[c] = mean;
    scaler.sigma[c] = sigma;
  }
  return scaler;
}

Tensor apply_scaler(const ColumnScaler& scaler, const Tensor& matrix) {
  if (matrix.rank() != 2 || matrix.dim(1) != scaler.mu.size()) {
    throw DimensionError("apply_scaler: scaler width " + std::to_string(scaler.mu.size()) +
                         " does not match " + to_string(matrix.shape()));
  }
  Tensor out = matrix;
  for (std::size_t r = 0; r < out.dim(0); ++r)
    for (std::size_t c = 0; c < out.dim(1); ++c) out(r, c) = (out(r, c) - scaler.mu[c]) / scaler.sigma[c];
  return out;
}

Tensor inverse_scaler(const ColumnScaler& scaler, const Tensor& matrix) {
  if (matrix.rank() != 2 || matrix.dim(1) != scaler.mu.size()) {
    throw DimensionError("inverse_scaler: scaler width " + std::to_string(scaler.mu.size()) +
                         " does not match " + to_string(matrix.shape()));
  }
  Tensor out = matrix;
  for (std::size_t r = 0; r < out.dim(0); ++r)
    for (std::size_t c = 0; c < out.dim(1); ++c) out(r, c) = out(r, c) * scaler.sigma[c] + scaler.mu[c];
  return out;
}

std::vector<std::string> fit_vocab(const std::vector<std::string>& column,
                                   std::span<const std::size_t> rows) {
  std::set<std::string> values;
  for (std::size_t r : rows)
    if (!column.at(r).empty()) values.insert(column[r]);
  return {values.begin(), values.end()};
}

OneHotBlock one_hot_encode(const std::vector<std::string>& column,
                           const std::vector<std::string>& vocab) {
  if (vocab.empty()) throw DataError("one-hot encoding needs a non-empty vocabulary");
  if (column.empty()) throw DataError("one-hot encoding of an empty column");
  OneHotBlock out{Tensor({column.size(), vocab.size()}), 0};
  for (std::size_t r = 0; r < column.size(); ++r) {
    const auto it = std::lower_bound(vocab.begin(), vocab.end(), column[r]);
    if (it != vocab.end() && *it == column[r]) {
      out.block(r, static_cast<std::size_t>(it - vocab.begin())) = 1.0;
    } else {
      ++out.unseen;
    }
  }
  return out;
}

nlohmann::json OutlierReport::to_json() const {
  return {{"q1", q1},
          {"q3", q3},
          {"lower_fence", lower_fence},
          {"upper_fence", upper_fence},
          {"flagged_count", flagged_rows.size()},
          {"flagged_rows", flagged_rows}};
}

double linear_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

OutlierReport iqr_outlier_report(std::span<const double> column) {
  if (column.size() < 4) {
    throw DataError("IQR outlier report needs at least 4 values, got " + std::to_string(column.size()));
  }
  std::vector<double> sorted;
  for (double v : column)
    if (!is_missing(v)) sorted.push_back(v);
  if (sorted.size() < 4) throw DataError("IQR outlier report needs at least 4 present values");
  std::sort(sorted.begin(), sorted.end());
  OutlierReport report;
  report.q1 = linear_quantile(sorted, 0.25);
  report.q3 = linear_quantile(sorted, 0.75);
  const double iqr = report.q3 - report.q1;
  report.lower_fence = report.q1 - 1.5 * iqr;
  report.upper_fence = report.q3 + 1.5 * iqr;
  for (std::size_t r = 0; r < column.size(); ++r) {
    const double v = column[r];
    if (!is_missing(v) && (v < report.lower_fence || v > report.upper_fence)) report.flagged_rows.push_back(r);
  }
  return report;
}

void derive_features(RawTable& table) {
  const auto& torque = table.numeric_column("Torque");
  const auto& rpm = table.numeric_column("RPM");
  const auto& wob = table.numeric_column("WOB");
  const auto& gpm = table.numeric_column("Flow Rate");
  const auto& psi = table.numeric_column("Standpipe Pressure");
  if (!table.has_target()) throw DataError("specific energy ratio needs the ROP column");
  const auto& rop = table.target;
  const std::size_t rows = table.rows();
  std::vector<double> ser(rows), hhp(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double denom = wob[r] * rop[r];
    ser[r] = (is_missing(denom) || denom == 0.0 || is_missing(torque[r]) || is_missing(rpm[r]))
                 ? kMissing
                 : torque[r] * rpm[r] / denom;
    hhp[r] = (is_missing(gpm[r]) || is_missing(psi[r])) ? kMissing : gpm[r] * psi[r] / 1714.0;
  }
  table.numeric_names.push_back(kSpecificEnergyRatio);
  table.numeric.push_back(std::move(ser));
  table.numeric_names.push_back(kHydraulicHorsepower);
  table.numeric.push_back(std::move(hhp));
}

SplitIndices split_train_test(std::size_t n, std::uint64_t seed) {
  if (n < 5) throw DataError("train/test split needs at least 5 samples, got " + std::to_string(n));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  SeededRng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  const auto n_train = static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(n)));
  SplitIndices split;
  split.seed = seed;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Windows make_windows(const Tensor& matrix, std::span<const double> targets, std::size_t window_len) {
  if (matrix.rank() != 2) throw DimensionError("make_windows expects an [N x D] matrix");
  const std::size_t n = matrix.dim(0), d = matrix.dim(1);
  if (window_len == 0 || window_len > n) {
    throw DataError("window length " + std::to_string(window_len) + " does not fit " +
                    std::to_string(n) + " rows");
  }
  if (!targets.empty() && targets.size() != n) throw DimensionError("make_windows: target count differs from rows");
  const std::size_t m = n - window_len + 1;
  Windows out{Tensor({m, window_len, d}), Tensor({m, d}), {}};
  if (!targets.empty()) out.targets = Tensor({m, 1});
  for (std::size_t i = 0; i < m; ++i) {
    std::copy_n(matrix.raw() + i * d, window_len * d, out.windows.raw() + i * window_len * d);
    std::copy_n(matrix.raw() + (i + window_len - 1) * d, d, out.statics.raw() + i * d);
    if (!targets.empty()) out.targets[i] = targets[i + window_len - 1];
  }
  return out;
}

std::vector<std::string> PreprocessorState::input_names() const {
  std::vector<std::string> names = numeric_features;
  for (std::size_t c = 0; c < categorical_features.size(); ++c)
    for (const auto& value : category_vocab[c]) names.push_back(categorical_features[c] + "=" + value);
  return names;
}

nlohmann::json PreprocessorState::to_json() const {
  return {{"numeric_features", numeric_features},
          {"feature_means", feature_means},
          {"scaler_mu", scaler.mu},
          {"scaler_sigma", scaler.sigma},
          {"categorical_features", categorical_features},
          {"category_vocab", category_vocab},
          {"target_name", target_name},
          {"target_mu", target_mu},
          {"target_sigma", target_sigma},
          {"derived_features", derived_features}};
}

PreprocessorState PreprocessorState::from_json(const nlohmann::json& j) {
  PreprocessorState s;
  j.at("numeric_features").get_to(s.numeric_features);
  j.at("feature_means").get_to(s.feature_means);
  j.at("scaler_mu").get_to(s.scaler.mu);
  j.at("scaler_sigma").get_to(s.scaler.sigma);
  j.at("categorical_features").get_to(s.categorical_features);
  j.at("category_vocab").get_to(s.category_vocab);
  j.at("target_name").get_to(s.target_name);
  j.at("target_mu").get_to(s.target_mu);
  j.at("target_sigma").get_to(s.target_sigma);
  j.at("derived_features").get_to(s.derived_features);
  const std::size_t n = s.numeric_features.size();
  if (s.feature_means.size() != n || s.scaler.mu.size() != n || s.scaler.sigma.size() != n ||
      s.category_vocab.size() != s.categorical_features.size()) {
    throw DataError("preprocessor state has inconsistent column counts");
  }
  return s;
}

std::vector<double> inverse_target(const PreprocessorState& state, std::span<const double> scaled) {
  std::vector<double> out(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) out[i] = state.unscale_target(scaled[i]);
  return out;
}

namespace {

std::size_t column_index(const std::vector<std::string>& names, const std::string& name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError("input is missing fitted column \"" + name + "\"");
  return static_cast<std::size_t>(it - names.begin());
}

/// Imputed, scaled numeric block followed by one-hot blocks, [N x D].
Tensor feature_matrix(const PreprocessorState& state, const RawTable& table,
                      std::vector<std::string>& warnings) {
  const std::size_t rows = table.rows();
  const std::size_t width = state.input_width();
  if (width == 0) throw DataError("no input features configured");
  if (rows == 0) throw DataError("input table has no rows");
  Tensor matrix({rows, width});
  for (std::size_t c = 0; c < state.numeric_features.size(); ++c) {
    const auto& col = table.numeric[column_index(table.numeric_names, state.numeric_features[c])];
    for (std::size_t r = 0; r < rows; ++r) {
      const double v = is_missing(col[r]) ? state.feature_means[c] : col[r];
      matrix(r, c) = (v - state.scaler.mu[c]) / state.scaler.sigma[c];
    }
  }
  std::size_t offset = state.numeric_features.size();
  for (std::size_t c = 0; c < state.categorical_features.size(); ++c) {
    const auto& name = state.categorical_features[c];
    const auto& col = table.categorical[column_index(table.categorical_names, name)];
    const OneHotBlock encoded = one_hot_encode(col, state.category_vocab[c]);
    if (encoded.unseen) {
      warnings.push_back(std::to_string(encoded.unseen) + " value(s) of \"" + name +
                         "\" are outside the fitted vocabulary and encode as all zeros");
    }
    const std::size_t v = state.category_vocab[c].size();
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t k = 0; k < v; ++k) matrix(r, offset + k) = encoded.block(r, k);
    offset += v;
  }
  return matrix;
}

RawTable labeled_rows(const RawTable& table, std::vector<std::string>& warnings) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < table.rows(); ++r)
    if (!is_missing(table.target[r])) keep.push_back(r);
  if (keep.size() == table.rows()) return table;
  warnings.push_back("dropped " + std::to_string(table.rows() - keep.size()) +
                     " row(s) with a missing target");
  RawTable out = table;
  for (auto& col : out.numeric) {
    std::vector<double> kept;
    for (std::size_t r : keep) kept.push_back(col[r]);
    col = std::move(kept);
  }
  for (auto& col : out.categorical) {
    std::vector<std::string> kept;
    for (std::size_t r : keep) kept.push_back(col[r]);
    col = std::move(kept);
  }
  std::vector<double> target;
  for (std::size_t r : keep) target.push_back(table.target[r]);
  out.target = std::move(target);
  return out;
}

}  // namespace

PreparedData prepare_dataset(const RawTable& input, const PipelineOptions& options) {
  if (!input.has_target()) throw DataError("training data needs the target column");
  PreparedData out;
  RawTable table = labeled_rows(input, out.warnings);
  if (options.derived_features) derive_features(table);

  const std::size_t n = table.rows(), steps = options.window_len;
  if (steps == 0 || steps > n) {
    throw DataError("window length " + std::to_string(steps) + " does not fit " + std::to_string(n) + " rows");
  }
  out.split = split_train_test(n - steps + 1, options.split_seed);
  std::set<std::size_t> covered;
  for (std::size_t w : out.split.train)
    for (std::size_t t = 0; t < steps; ++t) covered.insert(w + t);
  const std::vector<std::size_t> train_rows(covered.begin(), covered.end());

  PreprocessorState& state = out.state;
  state.numeric_features = table.numeric_names;
  state.categorical_features = table.categorical_names;
  state.target_name = table.target_name;
  state.derived_features = options.derived_features;

  // Mean imputation, means from training rows.
  state.feature_means = fit_column_means(table.numeric, table.numeric_names, train_rows);
  std::vector<std::vector<double>> imputed = table.numeric;
  for (std::size_t c = 0; c < imputed.size(); ++c) {
    std::size_t missing = 0;
    for (double& v : imputed[c]) {
      if (is_missing(v)) {
        v = state.feature_means[c];
        ++missing;
      }
    }
    out.imputation.columns.push_back({table.numeric_names[c],
                                      static_cast<double>(missing) / static_cast<double>(n),
                                      state.feature_means[c]});
    out.outliers.emplace(table.numeric_names[c], iqr_outlier_report(imputed[c]));
  }

  // Feature scaler on training rows.
  if (!imputed.empty()) {
    Tensor train_matrix({train_rows.size(), imputed.size()});
    for (std::size_t i = 0; i < train_rows.size(); ++i)
      for (std::size_t c = 0; c < imputed.size(); ++c) train_matrix(i, c) = imputed[c][train_rows[i]];
    state.scaler = fit_scaler(train_matrix, table.numeric_names);
  }
  for (const auto& col : table.categorical) state.category_vocab.push_back(fit_vocab(col, train_rows));
  for (std::size_t c = 0; c < state.categorical_features.size(); ++c) {
    if (state.category_vocab[c].empty()) {
      throw DataError("categorical column \"" + state.categorical_features[c] +
                      "\" has no values on the training rows");
    }
  }

  // Target scaler on training rows.
  {
    double mean = 0.0, var = 0.0;
    for (std::size_t r : train_rows) mean += table.target[r];
    mean /= static_cast<double>(train_rows.size());
    for (std::size_t r : train_rows) var += (table.target[r] - mean) * (table.target[r] - mean);
    var /= static_cast<double>(train_rows.size());
    if (!(var > 0.0)) throw DataError("target \"" + table.target_name + "\" is constant on the training rows");
    state.target_mu = mean;
    state.target_sigma = std::sqrt(var);
  }

  // Tensors for the split windows.
  const Tensor matrix = feature_matrix(state, table, out.warnings);
  std::vector<double> scaled_target(n);
  for (std::size_t r = 0; r < n; ++r) scaled_target[r] = state.scale_target(table.target[r]);
  Windows windows = make_windows(matrix, scaled_target, steps);
  Dataset all{std::move(windows.windows), std::move(windows.statics), std::move(windows.targets)};
  out.train = all.subset(out.split.train);
  out.test = all.subset(out.split.test);
  out.sample_rows.resize(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) out.sample_rows[i] = i + steps - 1;
  return out;
}

TransformedData transform_table(const PreprocessorState& state, const RawTable& input,
                                std::size_t window_len) {
  TransformedData out;
  RawTable table = input;
  if (state.derived_features) derive_features(table);
  const Tensor matrix = feature_matrix(state, table, out.warnings);
  std::vector<double> scaled;
  if (table.has_target()) {
    scaled.resize(table.rows());
    for (std::size_t r = 0; r < table.rows(); ++r)
      scaled[r] = is_missing(table.target[r]) ? kMissing : state.scale_target(table.target[r]);
  }
  Windows windows = make_windows(matrix, scaled, window_len);
  out.data = Dataset{std::move(windows.windows), std::move(windows.statics), std::move(windows.targets)};
  for (std::size_t i = 0; i < out.data.size(); ++i) out.sample_rows.push_back(i + window_len - 1);
  return out;
}

}  // namespace ropnet
