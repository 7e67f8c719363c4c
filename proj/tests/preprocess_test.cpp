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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "ropnet/data_io.hpp"
#include "ropnet/errors.hpp"
#include "ropnet/preprocess.hpp"

namespace ropnet {
namespace {

RawTable small_table(std::size_t rows) {
  RawTable t;
  t.numeric_names = {"A", "B"};
  t.numeric.assign(2, {});
  t.target_name = "ROP";
  for (std::size_t r = 0; r < rows; ++r) {
    const double x = static_cast<double>(r);
    t.numeric[0].push_back(x);
    t.numeric[1].push_back(std::sin(x) * 10.0 + 3.0);
    t.target.push_back(2.0 * x + 1.0);
  }
  return t;
}

TEST(ScalerTest, RoundTripIsIdentity) {
  SeededRng rng(1);
  Tensor m = oracle::random_tensor(rng, {50, 4}, 30.0);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] += 1000.0;
  const ColumnScaler s = fit_scaler(m, {"a", "b", "c", "d"});
  const Tensor back = inverse_scaler(s, apply_scaler(s, m));
  EXPECT_LE(oracle::max_abs_diff(back, m), 1e-9);
}

TEST(ScalerTest, ScaledTrainingColumnsAreCentered) {
  SeededRng rng(2);
  Tensor m = oracle::random_tensor(rng, {200, 3}, 5.0);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] += 50.0;
  const Tensor z = apply_scaler(fit_scaler(m, {"a", "b", "c"}), m);
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0.0, var = 0.0;
    for (std::size_t r = 0; r < 200; ++r) mean += z(r, c);
    mean /= 200.0;
    for (std::size_t r = 0; r < 200; ++r) var += (z(r, c) - mean) * (z(r, c) - mean);
    EXPECT_LT(std::fabs(mean), 1e-9);
    EXPECT_NEAR(var / 200.0, 1.0, 1e-12);
  }
}

TEST(ScalerTest, UsesPopulationDeviation) {
  const ColumnScaler s = fit_scaler(Tensor({4, 1}, {1, 2, 3, 4}), {"x"});
  EXPECT_DOUBLE_EQ(s.mu[0], 2.5);
  EXPECT_DOUBLE_EQ(s.sigma[0], std::sqrt(1.25));
}

TEST(ScalerTest, ConstantColumnIsNamed) {
  try {
    fit_scaler(Tensor({3, 2}, {1, 5, 2, 5, 3, 5}), {"x", "Flat"});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("Flat"), std::string::npos);
  }
}

TEST(ImputationTest, FillsWithColumnMean) {
  const ImputationResult r = impute_mean({{1.0, kMissing, 3.0}, {kMissing, 4.0, 8.0}}, {"a", "b"});
  EXPECT_EQ(r.columns[0][1], 2.0);
  EXPECT_EQ(r.columns[1][0], 6.0);
  EXPECT_NEAR(r.report.columns[0].missing_fraction, 1.0 / 3.0, 1e-15);
  EXPECT_THROW(impute_mean({{kMissing, kMissing}}, {"empty"}), DataError);
}

TEST(ImputationTest, MeansComeFromRequestedRowsOnly) {
  const std::vector<std::size_t> rows{0, 1};
  const auto means = fit_column_means({{1.0, 3.0, 1000.0}}, {"a"}, rows);
  EXPECT_EQ(means[0], 2.0);
}

TEST(OneHotTest, EncodesInVocabularyOrder) {
  const std::vector<std::string> col{"PDC", "Roller", "", "Hybrid", "PDC"};
  const std::vector<std::size_t> rows{0, 1, 3, 4};
  const auto vocab = fit_vocab(col, rows);
  ASSERT_EQ(vocab, (std::vector<std::string>{"Hybrid", "PDC", "Roller"}));
  const OneHotBlock enc = one_hot_encode({"Roller", "", "Diamond"}, vocab);
  EXPECT_EQ(enc.block, Tensor({3, 3}, {0, 0, 1, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(enc.unseen, 2u);
  EXPECT_THROW(one_hot_encode(col, {}), DataError);
}

TEST(OutlierTest, FlagsOnlyTheExtremeValue) {
  const std::vector<double> v{1, 2, 3, 4, 100};
  const OutlierReport r = iqr_outlier_report(v);
  EXPECT_EQ(r.q1, 2.0);
  EXPECT_EQ(r.q3, 4.0);
  EXPECT_EQ(r.lower_fence, -1.0);
  EXPECT_EQ(r.upper_fence, 7.0);
  EXPECT_EQ(r.flagged_rows, (std::vector<std::size_t>{4}));
}

TEST(OutlierTest, LinearQuantileInterpolates) {
  const std::vector<double> sorted{10, 20, 30, 40};
  EXPECT_DOUBLE_EQ(linear_quantile(sorted, 0.25), 17.5);
  EXPECT_DOUBLE_EQ(linear_quantile(sorted, 0.75), 32.5);
  EXPECT_DOUBLE_EQ(linear_quantile(sorted, 0.0), 10.0);
  EXPECT_DOUBLE_EQ(linear_quantile(sorted, 1.0), 40.0);
  EXPECT_THROW(iqr_outlier_report(std::vector<double>{1, 2, 3}), DataError);
}

TEST(DerivedFeatureTest, Formulas) {
  RawTable t;
  t.numeric_names = {"WOB", "RPM", "Torque", "Standpipe Pressure", "Flow Rate"};
  t.numeric = {{20.0, 0.0}, {120.0, 100.0}, {10.0, 8.0}, {3000.0, 2000.0}, {600.0, kMissing}};
  t.target_name = "ROP";
  t.target = {50.0, 40.0};
  derive_features(t);
  const auto& ser = t.numeric_column(kSpecificEnergyRatio);
  const auto& hhp = t.numeric_column(kHydraulicHorsepower);
  EXPECT_DOUBLE_EQ(ser[0], 10.0 * 120.0 / (20.0 * 50.0));
  EXPECT_TRUE(is_missing(ser[1]));
  EXPECT_DOUBLE_EQ(hhp[0], 600.0 * 3000.0 / 1714.0);
  EXPECT_TRUE(is_missing(hhp[1]));
}

TEST(SplitTest, EightyTwentyAndReproducible) {
  const SplitIndices a = split_train_test(10672, 42);
  const SplitIndices b = split_train_test(10672, 42);
  EXPECT_EQ(a.train.size(), 8538u);
  EXPECT_EQ(a.test.size(), 2134u);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  std::set<std::size_t> all(a.train.begin(), a.train.end());
  all.insert(a.test.begin(), a.test.end());
  EXPECT_EQ(all.size(), 10672u);
  EXPECT_TRUE(std::is_sorted(a.train.begin(), a.train.end()));
  EXPECT_NE(split_train_test(10672, 43).test, a.test);
}

TEST(SplitTest, SmallSizes) {
  EXPECT_EQ(split_train_test(10).train.size(), 8u);
  EXPECT_EQ(split_train_test(5).test.size(), 1u);
  EXPECT_THROW(split_train_test(4), DataError);
}

TEST(WindowTest, SlidingWindowsTakeLastTarget) {
  Tensor m({5, 2}, {0, 10, 1, 11, 2, 12, 3, 13, 4, 14});
  const std::vector<double> y{100, 101, 102, 103, 104};
  const Windows w = make_windows(m, y, 3);
  ASSERT_EQ(w.windows.shape(), (Shape{3, 3, 2}));
  EXPECT_EQ(w.windows(1, 0, 0), 1.0);
  EXPECT_EQ(w.windows(1, 2, 1), 13.0);
  EXPECT_EQ(w.statics(2, 0), 4.0);
  EXPECT_EQ(w.targets(0, 0), 102.0);
  EXPECT_THROW(make_windows(m, y, 6), DataError);
  EXPECT_THROW(make_windows(m, y, 0), DataError);
}

TEST(PipelineTest, FitsOnTrainingRowsAndCentersThem) {
  const RawTable t = small_table(100);
  const PreparedData p = prepare_dataset(t, {});
  EXPECT_EQ(p.train.size(), 80u);
  EXPECT_EQ(p.test.size(), 20u);
  for (std::size_t c = 0; c < 2; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < p.train.size(); ++i) mean += p.train.statics(i, c);
    EXPECT_LT(std::fabs(mean / 80.0), 1e-9);
  }
  double tmean = 0.0;
  for (std::size_t i = 0; i < p.train.size(); ++i) tmean += p.train.targets(i, 0);
  EXPECT_LT(std::fabs(tmean / 80.0), 1e-9);
  // Scaler parameters depend only on training rows.
  double mu = 0.0;
  for (std::size_t r : p.split.train) mu += t.numeric[0][r];
  EXPECT_NEAR(p.state.scaler.mu[0], mu / 80.0, 1e-12);
}

TEST(PipelineTest, TestRowsDoNotInfluenceTheFit) {
  RawTable a = small_table(100);
  RawTable b = a;
  const PreparedData pa = prepare_dataset(a, {});
  for (std::size_t r : pa.split.test) b.numeric[1][r] = 1e6;
  const PreparedData pb = prepare_dataset(b, {});
  EXPECT_EQ(pa.state.scaler.mu, pb.state.scaler.mu);
  EXPECT_EQ(pa.state.scaler.sigma, pb.state.scaler.sigma);
  EXPECT_EQ(pa.state.target_mu, pb.state.target_mu);
}

TEST(PipelineTest, ImputesWithTrainingMeans) {
  RawTable t = small_table(50);
  t.numeric[0][7] = kMissing;
  const PreparedData p = prepare_dataset(t, {});
  ASSERT_EQ(p.imputation.columns.size(), 2u);
  EXPECT_NEAR(p.imputation.columns[0].missing_fraction, 1.0 / 50.0, 1e-15);
  EXPECT_EQ(p.imputation.columns[0].fill_value, p.state.feature_means[0]);
  EXPECT_TRUE(std::isfinite(p.state.scaler.mu[0]));
}

TEST(PipelineTest, DropsUnlabeledRowsWithWarning) {
  RawTable t = small_table(30);
  t.target[3] = kMissing;
  const PreparedData p = prepare_dataset(t, {});
  EXPECT_EQ(p.train.size() + p.test.size(), 29u);
  ASSERT_FALSE(p.warnings.empty());
}

TEST(PipelineTest, WindowedSplitCountsWindows) {
  PipelineOptions opts;
  opts.window_len = 4;
  const PreparedData p = prepare_dataset(small_table(103), opts);
  EXPECT_EQ(p.train.size() + p.test.size(), 100u);
  EXPECT_EQ(p.train.window_len(), 4u);
}

TEST(PipelineTest, CategoricalColumnsAreOneHotAndUnscaled) {
  RawTable t = small_table(40);
  t.categorical_names = {"Bit"};
  t.categorical.push_back({});
  for (std::size_t r = 0; r < 40; ++r) t.categorical[0].push_back(r % 3 == 0 ? "PDC" : "Roller");
  const PreparedData p = prepare_dataset(t, {});
  EXPECT_EQ(p.state.input_names(), (std::vector<std::string>{"A", "B", "Bit=PDC", "Bit=Roller"}));
  for (std::size_t i = 0; i < p.train.size(); ++i) {
    EXPECT_EQ(p.train.statics(i, 2) + p.train.statics(i, 3), 1.0);
  }
}

TEST(PipelineTest, TransformReproducesPreparedTensors) {
  const RawTable t = small_table(60);
  const PreparedData p = prepare_dataset(t, {});
  const TransformedData tr = transform_table(p.state, t, 1);
  const Dataset test = tr.data.subset(p.split.test);
  EXPECT_EQ(test.statics, p.test.statics);
  EXPECT_EQ(test.targets, p.test.targets);
}

TEST(PipelineTest, StateJsonRoundTrip) {
  RawTable t = small_table(40);
  t.categorical_names = {"Bit"};
  t.categorical.push_back(std::vector<std::string>(40, "PDC"));
  const PreparedData p = prepare_dataset(t, {});
  const PreprocessorState back = PreprocessorState::from_json(p.state.to_json());
  EXPECT_EQ(back.to_json(), p.state.to_json());
  EXPECT_EQ(back.scaler.mu, p.state.scaler.mu);
  EXPECT_EQ(back.target_sigma, p.state.target_sigma);
}

TEST(PipelineTest, InverseTargetRestoresUnits) {
  const PreparedData p = prepare_dataset(small_table(50), {});
  std::vector<double> scaled;
  for (std::size_t i = 0; i < p.test.size(); ++i) scaled.push_back(p.test.targets(i, 0));
  const auto restored = inverse_target(p.state, scaled);
  for (std::size_t i = 0; i < restored.size(); ++i) {
    EXPECT_NEAR(restored[i], 2.0 * static_cast<double>(p.sample_rows[p.split.test[i]]) + 1.0, 1e-9);
  }
}

}  // namespace
}  // namespace ropnet
