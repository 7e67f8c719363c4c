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

#include "ropnet/explain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ropnet/data_io.hpp"
#include "ropnet/errors.hpp"
#include "ropnet/train.hpp"

namespace ropnet {

BatchPredictor predictor_for(const Model& model) {
  return [&model](const Tensor& windows, const Tensor& statics) { return model.predict(windows, statics); };
}

nlohmann::json ImportanceReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& f : features) rows.push_back({{"feature", f.feature}, {"importance", f.importance}, {"rank", f.rank}});
  return {{"base_mse", base_mse}, {"repeats", repeats}, {"features", rows}};
}

void ImportanceReport::write_csv(std::ostream& out) const {
  std::vector<FeatureImportance> sorted = features;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
  out << "feature,importance,rank\n";
  for (const auto& f : sorted) {
    std::string name = f.feature;
    if (name.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : name) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      name = quoted + '"';
    }
    out << name << ',' << format_double(f.importance) << ',' << f.rank << '\n';
  }
}

namespace {

double batch_mse(const BatchPredictor& predict, const Tensor& windows, const Tensor& statics,
                 const Tensor& targets) {
  return mse_loss(predict(windows, statics), targets).loss;
}

}  // namespace

double permuted_mse(const BatchPredictor& predict, const Dataset& data, std::size_t feature,
                    std::span<const std::size_t> perm, double mse_scale) {
  const std::size_t n = data.size(), steps = data.window_len(), d = data.features();
  if (feature >= d) throw DimensionError("permuted feature index out of range");
  if (perm.size() != n) throw DimensionError("permutation length differs from the sample count");
  Tensor windows = data.windows;
  Tensor statics = data.statics;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = perm[i];
    for (std::size_t t = 0; t < steps; ++t) windows(i, t, feature) = data.windows(src, t, feature);
    statics(i, feature) = data.statics(src, feature);
  }
  return mse_scale * batch_mse(predict, windows, statics, data.targets);
}

ImportanceReport permutation_importance(const BatchPredictor& predict, const Dataset& data,
                                        const std::vector<std::string>& names, SeededRng& rng,
                                        std::size_t repeats, double mse_scale) {
  if (!data.labeled() || data.size() < 2) {
    throw DataError("permutation importance needs at least two labeled samples");
  }
  if (repeats < 3) throw ConfigError("permutation importance needs at least 3 repeats");
  const std::size_t n = data.size(), d = data.features();
  if (names.size() != d) throw DimensionError("feature names do not match the input width");

  ImportanceReport report;
  report.repeats = repeats;
  report.base_mse = mse_scale * batch_mse(predict, data.windows, data.statics, data.targets);
  std::vector<std::size_t> perm(n);
  for (std::size_t f = 0; f < d; ++f) {
    SeededRng feature_rng = rng.split(f);
    double total = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[feature_rng.below(i + 1)]);
      total += permuted_mse(predict, data, f, perm, mse_scale) - report.base_mse;
    }
    report.features.push_back({names[f], total / static_cast<double>(repeats), 0});
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.features[a].importance > report.features[b].importance;
  });
  for (std::size_t r = 0; r < d; ++r) report.features[order[r]].rank = r + 1;
  rng.next_u64();
  return report;
}

PointPredictor last_step_predictor(const Model& model, const Dataset& data, std::size_t index) {
  if (index >= data.size()) throw DataError("anchor sample index out of range");
  std::vector<std::size_t> one{index};
  Dataset sample = data.subset(one);
  return [&model, sample](std::span<const double> x) {
    const std::size_t steps = sample.window_len(), d = sample.features();
    if (x.size() != d) throw DimensionError("surrogate query has the wrong width");
    Tensor windows = sample.windows;
    Tensor statics = sample.statics;
    for (std::size_t c = 0; c < d; ++c) {
      windows(0, steps - 1, c) = x[c];
      statics(0, c) = x[c];
    }
    return model.predict(windows, statics)[0];
  };
}

nlohmann::json LocalSurrogate::to_json(const std::vector<std::string>& names) const {
  nlohmann::json w = nlohmann::json::object();
  for (std::size_t i = 0; i < weights.size(); ++i) w[i < names.size() ? names[i] : std::to_string(i)] = weights[i];
  return {{"anchor", anchor}, {"radius", radius},   {"samples", samples},
          {"weights", w},     {"intercept", intercept}, {"fit_r2", fit_r2}};
}

LocalSurrogate local_surrogate(const PointPredictor& predict, std::span<const double> anchor, double radius,
                               std::size_t n_samples, SeededRng& rng) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw RangeError("surrogate radius must be positive");
  if (n_samples < 50) throw RangeError("surrogate needs at least 50 perturbed samples");
  const std::size_t d = anchor.size();
  if (d == 0) throw DimensionError("surrogate anchor is empty");

  // Columns: intercept, then offsets from the anchor.
  Eigen::MatrixXd design(n_samples, d + 1);
  Eigen::VectorXd response(n_samples);
  Eigen::VectorXd weight(n_samples);
  std::vector<double> point(d);
  for (std::size_t s = 0; s < n_samples; ++s) {
    double dist2 = 0.0;
    design(static_cast<Eigen::Index>(s), 0) = 1.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double offset = radius * rng.normal();
      point[c] = anchor[c] + offset;
      design(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c + 1)) = offset;
      dist2 += offset * offset;
    }
    weight(static_cast<Eigen::Index>(s)) = std::exp(-dist2 / (radius * radius));
    response(static_cast<Eigen::Index>(s)) = predict(point);
  }

  const Eigen::VectorXd root_w = weight.cwiseSqrt();
  const Eigen::MatrixXd weighted_design = root_w.asDiagonal() * design;
  const Eigen::VectorXd weighted_response = root_w.cwiseProduct(response);
  const Eigen::MatrixXd normal = weighted_design.transpose() * weighted_design;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(normal);
  const auto& sv = svd.singularValues();
  const double rcond = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  if (!(rcond >= kSurrogateMinRcond)) {
    throw DegenerateNeighborhoodError("surrogate normal equations are ill-conditioned (rcond " +
                                      std::to_string(rcond) + "); increase the radius");
  }
  const Eigen::VectorXd beta = weighted_design.colPivHouseholderQr().solve(weighted_response);

  LocalSurrogate out;
  out.anchor.assign(anchor.begin(), anchor.end());
  out.radius = radius;
  out.samples = n_samples;
  out.intercept = beta(0);
  for (std::size_t c = 0; c < d; ++c) out.weights.push_back(beta(static_cast<Eigen::Index>(c + 1)));

  const Eigen::VectorXd fitted = design * beta;
  const double wsum = weight.sum();
  const double wmean = weight.dot(response) / wsum;
  double ss_res = 0.0, ss_tot = 0.0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n_samples); ++i) {
    ss_res += weight(i) * (response(i) - fitted(i)) * (response(i) - fitted(i));
    ss_tot += weight(i) * (response(i) - wmean) * (response(i) - wmean);
  }
  out.fit_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  for (double w : out.weights) {
    if (!std::isfinite(w)) throw DegenerateNeighborhoodError("surrogate produced non-finite weights");
  }
  return out;
}

}  // namespace ropnet
