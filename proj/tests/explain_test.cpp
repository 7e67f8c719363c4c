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
#include <numeric>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "ropnet/data_io.hpp"
#include "ropnet/errors.hpp"
#include "ropnet/explain.hpp"
#include "ropnet/preprocess.hpp"
#include "ropnet/train.hpp"

namespace ropnet {
namespace {

Dataset random_dataset(std::size_t n, std::size_t steps, std::size_t d, std::uint64_t seed,
                       const std::vector<double>& w) {
  SeededRng rng(seed);
  Dataset ds{oracle::random_tensor(rng, {n, steps, d}), Tensor({n, d}), Tensor({n, 1})};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) {
      ds.statics(i, c) = ds.windows(i, steps - 1, c);
      ds.targets(i, 0) += w[c] * ds.statics(i, c);
    }
  return ds;
}

BatchPredictor linear_predictor(std::vector<double> w) {
  return [w](const Tensor&, const Tensor& statics) {
    Tensor out({statics.dim(0), 1});
    for (std::size_t i = 0; i < statics.dim(0); ++i)
      for (std::size_t c = 0; c < w.size(); ++c) out(i, 0) += w[c] * statics(i, c);
    return out;
  };
}

const std::vector<std::string> kNames{"a", "b", "c", "d"};

TEST(PermutationImportanceTest, IdentityPermutationChangesNothing) {
  const std::vector<double> w{3, 0, 1, 0};
  const Dataset ds = random_dataset(50, 2, 4, 1, w);
  SeededRng rng(2);
  const Model model = Model::build([] {
    ModelSpec s;
    s.kind = ModelKind::kAdvancedHybrid;
    s.input_features = 4;
    s.window_len = 2;
    s.lstm_hidden = 8;
    s.heads = 2;
    s.ffn_dim = 8;
    return s;
  }(), rng);
  const BatchPredictor predict = predictor_for(model);
  std::vector<std::size_t> identity(50);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  const double base = mse_loss(predict(ds.windows, ds.statics), ds.targets).loss;
  for (std::size_t f = 0; f < 4; ++f) EXPECT_EQ(permuted_mse(predict, ds, f, identity) - base, 0.0);
}

TEST(PermutationImportanceTest, ConstantModelHasNoImportance) {
  const Dataset ds = random_dataset(40, 1, 4, 3, {1, 1, 1, 1});
  const BatchPredictor constant = [](const Tensor&, const Tensor& s) { return Tensor({s.dim(0), 1}, 0.5); };
  SeededRng rng(4);
  const ImportanceReport r = permutation_importance(constant, ds, kNames, rng, 5);
  for (const auto& f : r.features) EXPECT_EQ(f.importance, 0.0);
}

TEST(PermutationImportanceTest, SignalFeatureRanksFirst) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const std::vector<double> w{0, 3, 0, 0};
    const Dataset ds = random_dataset(200, 1, 4, seed, w);
    SeededRng rng(seed);
    const ImportanceReport r = permutation_importance(linear_predictor(w), ds, kNames, rng, 3);
    EXPECT_EQ(r.features[1].rank, 1u) << "seed " << seed;
    EXPECT_GT(r.features[1].importance, 10.0);
    for (std::size_t f : {0, 2, 3}) EXPECT_EQ(r.features[f].importance, 0.0);
  }
}

TEST(PermutationImportanceTest, RanksArePermutationAndDeterministic) {
  const std::vector<double> w{1, -2, 0.5, 3};
  const Dataset ds = random_dataset(80, 3, 4, 6, w);
  SeededRng a(9), b(9);
  const ImportanceReport ra = permutation_importance(linear_predictor(w), ds, kNames, a, 4);
  const ImportanceReport rb = permutation_importance(linear_predictor(w), ds, kNames, b, 4);
  std::set<std::size_t> ranks;
  for (const auto& f : ra.features) ranks.insert(f.rank);
  EXPECT_EQ(ranks, (std::set<std::size_t>{1, 2, 3, 4}));
  EXPECT_EQ(ra.to_json(), rb.to_json());
  EXPECT_EQ(ra.features[3].rank, 1u);
  EXPECT_EQ(ra.features[2].rank, 4u);
}

TEST(PermutationImportanceTest, MseScaleConvertsUnits) {
  const std::vector<double> w{2, 0, 0, 0};
  const Dataset ds = random_dataset(60, 1, 4, 7, w);
  SeededRng a(1), b(1);
  const auto r1 = permutation_importance(linear_predictor(w), ds, kNames, a, 3, 1.0);
  const auto r4 = permutation_importance(linear_predictor(w), ds, kNames, b, 3, 4.0);
  EXPECT_NEAR(r4.features[0].importance, 4.0 * r1.features[0].importance, 1e-9);
}

TEST(PermutationImportanceTest, ErrorContracts) {
  const Dataset one = random_dataset(1, 1, 4, 1, {1, 0, 0, 0});
  SeededRng rng(1);
  EXPECT_THROW(permutation_importance(linear_predictor({1, 0, 0, 0}), one, kNames, rng, 3), DataError);
  const Dataset ds = random_dataset(10, 1, 4, 1, {1, 0, 0, 0});
  EXPECT_THROW(permutation_importance(linear_predictor({1, 0, 0, 0}), ds, kNames, rng, 2), ConfigError);
}

TEST(PermutationImportanceTest, CsvRowsInRankOrder) {
  const std::vector<double> w{0, 0, 5, 1};
  const Dataset ds = random_dataset(50, 1, 4, 8, w);
  SeededRng rng(1);
  std::ostringstream out;
  permutation_importance(linear_predictor(w), ds, kNames, rng, 3).write_csv(out);
  std::istringstream in(out.str());
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(header, "feature,importance,rank");
  EXPECT_EQ(first.substr(0, 2), "c,");
  EXPECT_EQ(first.substr(first.size() - 2), ",1");
  EXPECT_EQ(second.substr(0, 2), "d,");
}

TEST(LocalSurrogateTest, RecoversLinearWeights) {
  const std::vector<double> w{1.5, -2.0, 0.25, 4.0};
  const PointPredictor f = [&](std::span<const double> x) {
    double y = 0.7;
    for (std::size_t i = 0; i < 4; ++i) y += w[i] * x[i];
    return y;
  };
  const std::vector<double> anchor{0.3, -1.0, 2.0, 0.0};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SeededRng rng(seed);
    const LocalSurrogate s = local_surrogate(f, anchor, 0.5, 100, rng);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s.weights[i], w[i], 1e-6);
    double at_anchor = 0.7;
    for (std::size_t i = 0; i < 4; ++i) at_anchor += w[i] * anchor[i];
    EXPECT_NEAR(s.intercept, at_anchor, 1e-6);
    EXPECT_NEAR(s.fit_r2, 1.0, 1e-9);
    EXPECT_EQ(s.samples, 100u);
  }
}

TEST(LocalSurrogateTest, ConstantModelHasZeroWeights) {
  SeededRng rng(3);
  const std::vector<double> anchor{1, 2, 3};
  const LocalSurrogate s = local_surrogate([](std::span<const double>) { return 4.0; }, anchor, 1.0, 60, rng);
  for (double w : s.weights) EXPECT_NEAR(w, 0.0, 1e-9);
  EXPECT_NEAR(s.intercept, 4.0, 1e-9);
}

TEST(LocalSurrogateTest, VanishingRadiusIsDegenerate) {
  SeededRng rng(3);
  const std::vector<double> anchor{1, 2};
  const PointPredictor f = [](std::span<const double> x) { return x[0] + x[1]; };
  EXPECT_THROW(local_surrogate(f, anchor, 1e-9, 60, rng), DegenerateNeighborhoodError);
  EXPECT_NO_THROW(local_surrogate(f, anchor, 1e-3, 60, rng));
}

TEST(LocalSurrogateTest, ArgumentContracts) {
  SeededRng rng(3);
  const std::vector<double> anchor{1, 2};
  const PointPredictor f = [](std::span<const double> x) { return x[0]; };
  EXPECT_THROW(local_surrogate(f, anchor, 0.0, 60, rng), RangeError);
  EXPECT_THROW(local_surrogate(f, anchor, 1.0, 49, rng), RangeError);
}

TEST(LocalSurrogateTest, ExplainsATrainedModelLocally) {
  SyntheticSpec spec = SyntheticSpec::single_signal(0, 3.0, 0.1);
  spec.n_rows = 300;
  const PreparedData data = prepare_dataset(generate_synthetic(spec).table, {});
  ModelSpec ms;
  ms.kind = ModelKind::kHybridLstmMixer;
  ms.input_features = 8;
  ms.lstm_hidden = 16;
  SeededRng rng(1);
  Model model = Model::build(ms, rng);
  TrainConfig cfg;
  cfg.epochs = 15;
  train_model(model, data.train, data.test, cfg);
  const PointPredictor f = last_step_predictor(model, data.test, 0);
  std::vector<double> anchor;
  for (std::size_t c = 0; c < 8; ++c) anchor.push_back(data.test.statics(0, c));
  SeededRng srng(2);
  const LocalSurrogate s = local_surrogate(f, anchor, 0.5, 200, srng);
  std::size_t top = 0;
  for (std::size_t c = 1; c < 8; ++c)
    if (std::fabs(s.weights[c]) > std::fabs(s.weights[top])) top = c;
  EXPECT_EQ(top, 0u);
  const auto j = s.to_json(data.state.input_names());
  EXPECT_TRUE(j["weights"].contains("WOB"));
}

}  // namespace
}  // namespace ropnet
