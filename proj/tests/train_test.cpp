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
#include <sstream>

#include "oracles.hpp"
#include "ropnet/checkpoint.hpp"
#include "ropnet/data_io.hpp"
#include "ropnet/errors.hpp"
#include "ropnet/preprocess.hpp"
#include "ropnet/train.hpp"

namespace ropnet {
namespace {

PreparedData small_benchmark(std::size_t rows, std::size_t window_len, std::uint64_t seed = 42) {
  SyntheticSpec spec = SyntheticSpec::drilling_default();
  spec.n_rows = rows;
  spec.seed = seed;
  PipelineOptions opts;
  opts.window_len = window_len;
  return prepare_dataset(generate_synthetic(spec).table, opts);
}

ModelSpec spec_for(ModelKind kind, std::size_t features, std::size_t window_len) {
  ModelSpec spec;
  spec.kind = kind;
  spec.input_features = features;
  spec.window_len = window_len;
  spec.lstm_hidden = 16;
  spec.heads = 2;
  spec.ffn_dim = 16;
  return spec;
}

std::vector<Tensor> snapshot(const Model& model) {
  std::vector<Tensor> out;
  for (const Param* p : model.parameters()) out.push_back(p->value);
  return out;
}

TEST(MseTest, ZeroOnPerfectPrediction) {
  const Tensor y({3, 1}, {1, 2, 3});
  const MseResult r = mse_loss(y, y);
  EXPECT_EQ(r.loss, 0.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.grad[i], 0.0);
}

TEST(MseTest, UnitCase) {
  const MseResult r = mse_loss(Tensor({1, 1}, {1.0}), Tensor({1, 1}, {0.0}));
  EXPECT_EQ(r.loss, 1.0);
  EXPECT_EQ(r.grad[0], 2.0);
}

TEST(MseTest, MatchesLoopOracle) {
  SeededRng rng(3);
  const Tensor p = oracle::random_tensor(rng, {17, 1});
  const Tensor t = oracle::random_tensor(rng, {17, 1});
  double loss = 0.0;
  for (std::size_t i = 0; i < 17; ++i) loss += (p[i] - t[i]) * (p[i] - t[i]);
  loss /= 17.0;
  const MseResult r = mse_loss(p, t);
  EXPECT_NEAR(r.loss, loss, 1e-12);
  for (std::size_t i = 0; i < 17; ++i) EXPECT_NEAR(r.grad[i], 2.0 * (p[i] - t[i]) / 17.0, 1e-12);
}

TEST(MseTest, ShapeErrors) {
  EXPECT_THROW(mse_loss(Tensor({2, 1}), Tensor({3, 1})), DimensionError);
}

struct SingleParam {
  Param p;
  ParamRefs refs;
  explicit SingleParam(double value) : p("theta", Tensor({1}, value)) { refs = {&p}; }
};

TEST(AdamWTest, FirstStepMovesByLearningRate) {
  SingleParam s(0.0);
  TrainConfig cfg;
  cfg.weight_decay = 0.0;
  OptimState state;
  s.p.grad[0] = 1.0;
  adamw_step(s.refs, state, cfg);
  EXPECT_NEAR(s.p.value[0], -0.001 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(state.step, 1u);
}

TEST(AdamWTest, ZeroGradientDecaysGeometrically) {
  SingleParam s(1.0);
  TrainConfig cfg;
  OptimState state;
  for (int k = 1; k <= 1000; ++k) {
    s.p.grad[0] = 0.0;
    adamw_step(s.refs, state, cfg);
    ASSERT_NEAR(s.p.value[0], std::pow(1.0 - 0.001 * 1e-5, k), 1e-12) << "step " << k;
  }
}

TEST(AdamWTest, DecayIsNotRoutedThroughTheGradient) {
  // Adam with the decay folded into g normalizes it away: each step moves
  // theta by about lr, far more than the decoupled factor allows.
  SingleParam coupled(1.0);
  TrainConfig cfg;
  cfg.weight_decay = 0.0;
  OptimState state;
  for (int k = 0; k < 1000; ++k) {
    coupled.p.grad[0] = 1e-5 * coupled.p.value[0];
    adamw_step(coupled.refs, state, cfg);
  }
  const double decoupled = std::pow(1.0 - 0.001 * 1e-5, 1000);
  EXPECT_GT(std::fabs(coupled.p.value[0] - decoupled), 0.5);
}

TEST(AdamWTest, NoGradientNoDecayNoChange) {
  SingleParam s(0.75);
  TrainConfig cfg;
  cfg.weight_decay = 0.0;
  OptimState state;
  for (int k = 0; k < 10; ++k) adamw_step(s.refs, state, cfg);
  EXPECT_EQ(s.p.value[0], 0.75);
}

TEST(AdamWTest, NonFiniteGradientDiverges) {
  SingleParam s(0.0);
  OptimState state;
  s.p.grad[0] = NAN;
  EXPECT_THROW(adamw_step(s.refs, state, TrainConfig{}), DivergenceError);
}

TEST(AdamWTest, MomentShapesFollowParameters) {
  SeededRng rng(1);
  Model model = Model::build(spec_for(ModelKind::kAdvancedHybrid, 8, 3), rng);
  OptimState state;
  ParamRefs trainable;
  for (Param* p : model.parameters())
    if (p->trainable) trainable.push_back(p);
  adamw_step(trainable, state, TrainConfig{});
  ASSERT_EQ(state.m.size(), trainable.size());
  for (std::size_t i = 0; i < trainable.size(); ++i) {
    EXPECT_EQ(state.m[i].shape(), trainable[i]->value.shape());
    EXPECT_EQ(state.v[i].shape(), trainable[i]->value.shape());
  }
}

TEST(TrainConfigTest, DefaultsAndValidation) {
  const TrainConfig cfg;
  EXPECT_EQ(cfg.learning_rate, 0.001);
  EXPECT_EQ(cfg.weight_decay, 1e-5);
  EXPECT_EQ(cfg.batch_size, 64u);
  EXPECT_EQ(cfg.epochs, 100u);
  EXPECT_EQ(cfg.dropout, 0.2);
  TrainConfig bad;
  bad.batch_size = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = TrainConfig{};
  bad.learning_rate = -1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(TrainTest, ZeroEpochsLeavesModelUnchanged) {
  const PreparedData data = small_benchmark(200, 1);
  SeededRng rng(1);
  Model model = Model::build(spec_for(ModelKind::kHybridLstmMixer, 8, 1), rng);
  const auto before = snapshot(model);
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_TRUE(train_model(model, data.train, data.test, cfg).empty());
  EXPECT_EQ(snapshot(model), before);
}

TEST(TrainTest, SameSeedSameRun) {
  const PreparedData data = small_benchmark(300, 3);
  TrainConfig cfg;
  cfg.epochs = 3;
  auto run = [&] {
    SeededRng rng(cfg.seed);
    Model model = Model::build(spec_for(ModelKind::kAdvancedHybrid, 8, 3), rng);
    LossCurve curve = train_model(model, data.train, data.test, cfg);
    return std::make_pair(curve, snapshot(model));
  };
  const auto a = run();
  const auto b = run();
  ASSERT_EQ(a.first.size(), 3u);
  for (std::size_t e = 0; e < 3; ++e) {
    EXPECT_EQ(a.first[e].train_mse, b.first[e].train_mse);
    EXPECT_EQ(a.first[e].test_mse, b.first[e].test_mse);
  }
  EXPECT_EQ(a.second, b.second);
  std::ostringstream ca, cb;
  write_loss_curve_csv(ca, a.first);
  write_loss_curve_csv(cb, b.first);
  EXPECT_EQ(ca.str(), cb.str());
}

TEST(TrainTest, HookSeesEveryEpochAndTestLossIsInferenceMode) {
  const PreparedData data = small_benchmark(200, 2);
  SeededRng rng(5);
  Model model = Model::build(spec_for(ModelKind::kHybridLstmMixerAttention, 8, 2), rng);
  TrainConfig cfg;
  cfg.epochs = 4;
  std::vector<std::size_t> seen;
  double last_eval = 0.0;
  const LossCurve curve = train_model(model, data.train, data.test, cfg, [&](std::size_t epoch, const Model& m) {
    seen.push_back(epoch);
    last_eval = evaluate_mse(m, data.test);
  });
  EXPECT_EQ(seen, (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_EQ(curve.back().test_mse, last_eval);
  EXPECT_EQ(curve.back().test_mse, evaluate_mse(model, data.test));
  for (const auto& p : curve) {
    EXPECT_TRUE(std::isfinite(p.train_mse));
    EXPECT_TRUE(std::isfinite(p.test_mse));
  }
}

TEST(TrainTest, LinearTaskOverfits) {
  // y = X w* with no noise; the baseline LSTM at L = 1 must drive the
  // training loss below 1% of its first-epoch value.
  SeededRng data_rng(17);
  const std::size_t n = 1024, d = 8;
  Tensor x = oracle::random_tensor(data_rng, {n, 1, d});
  Tensor statics({n, d});
  Tensor y({n, 1});
  const std::vector<double> w{0.8, -0.5, 0.3, 0.0, 0.6, -0.2, 0.1, 0.4};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      statics(i, c) = x(i, 0, c);
      y(i, 0) += w[c] * x(i, 0, c);
    }
  }
  const Dataset train{x, statics, y};
  SeededRng rng(42);
  ModelSpec spec;
  spec.kind = ModelKind::kBaselineLstm;
  spec.input_features = d;
  Model model = Model::build(spec, rng);
  const LossCurve curve = train_model(model, train, train, TrainConfig{});
  ASSERT_EQ(curve.size(), 100u);
  EXPECT_LT(curve.back().train_mse, 0.01 * curve.front().train_mse);
}

TEST(TrainTest, NonFiniteLossReportsCoordinates) {
  PreparedData data = small_benchmark(200, 1);
  data.train.targets(5, 0) = NAN;
  SeededRng rng(1);
  Model model = Model::build(spec_for(ModelKind::kTsMixer, 8, 1), rng);
  TrainConfig cfg;
  cfg.epochs = 2;
  try {
    train_model(model, data.train, data.test, cfg);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 1"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("batch"), std::string::npos) << e.what();
  }
}

TEST(TrainTest, LossCurveCsvFormat) {
  std::ostringstream out;
  write_loss_curve_csv(out, {{1, 0.5, 0.25}, {2, 0.125, 0.1}});
  EXPECT_EQ(out.str(), "epoch,train_mse,test_mse\n1,0.5,0.25\n2,0.125,0.1\n");
}

TEST(TrainTest, PredictDatasetMatchesSingleBatch) {
  const PreparedData data = small_benchmark(700, 2);
  SeededRng rng(2);
  const Model model = Model::build(spec_for(ModelKind::kAdvancedHybrid, 8, 2), rng);
  const Tensor chunked = predict_dataset(model, data.train, 100);
  const Tensor whole = model.predict(data.train.windows, data.train.statics);
  EXPECT_LE(oracle::max_abs_diff(chunked, whole), 1e-12);
}

class CheckpointTest : public ::testing::TestWithParam<ModelKind> {};

TEST_P(CheckpointTest, RoundTripPredictsIdentically) {
  const PreparedData data = small_benchmark(200, 3);
  SeededRng rng(9);
  Model model = Model::build(spec_for(GetParam(), 8, 3), rng);
  TrainConfig cfg;
  cfg.epochs = 1;
  train_model(model, data.train, data.test, cfg);
  std::stringstream buf;
  write_checkpoint(buf, model, data.state);
  const LoadedCheckpoint loaded = read_checkpoint(buf);
  EXPECT_EQ(loaded.version, kCheckpointVersion);
  EXPECT_EQ(loaded.model.spec(), model.spec());
  EXPECT_EQ(loaded.preprocessor.to_json(), data.state.to_json());
  const auto a = model.parameters();
  const auto b = loaded.model.parameters();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i]->name, b[i]->name);
    for (std::size_t k = 0; k < a[i]->value.size(); ++k) {
      ASSERT_EQ(std::bit_cast<std::uint64_t>(a[i]->value[k]), std::bit_cast<std::uint64_t>(b[i]->value[k]));
    }
  }
  EXPECT_EQ(loaded.model.predict(data.test.windows, data.test.statics),
            model.predict(data.test.windows, data.test.statics));
}

INSTANTIATE_TEST_SUITE_P(AllKinds, CheckpointTest, ::testing::ValuesIn(kAllModelKinds),
                         [](const auto& info) { return std::string(to_string(info.param)); });

std::string checkpoint_bytes() {
  const PreparedData data = small_benchmark(150, 1);
  SeededRng rng(1);
  const Model model = Model::build(spec_for(ModelKind::kHybridLstmMixer, 8, 1), rng);
  std::ostringstream out;
  write_checkpoint(out, model, data.state);
  return out.str();
}

TEST(CheckpointFormatTest, StartsWithMagicAndLittleEndianVersion) {
  const std::string bytes = checkpoint_bytes();
  ASSERT_GE(bytes.size(), 8u);
  EXPECT_EQ(bytes.substr(0, 4), "ROPH");
  EXPECT_EQ(bytes.substr(4, 4), std::string("\x01\x00\x00\x00", 4));
}

TEST(CheckpointFormatTest, WrongMagicIsRejected) {
  std::string bytes = checkpoint_bytes();
  bytes[0] = 'X';
  std::istringstream in(bytes);
  EXPECT_THROW(read_checkpoint(in), CheckpointError);
}

TEST(CheckpointFormatTest, UnknownVersionIsRejected) {
  std::string bytes = checkpoint_bytes();
  bytes[4] = 7;
  std::istringstream in(bytes);
  EXPECT_THROW(read_checkpoint(in), CheckpointError);
}

TEST(CheckpointFormatTest, NewerReaderAcceptsVersionOne) {
  std::istringstream in(checkpoint_bytes());
  const LoadedCheckpoint loaded = read_checkpoint(in, ReadableVersions{1, 2});
  EXPECT_EQ(loaded.version, 1u);
  std::string v3 = checkpoint_bytes();
  v3[4] = 3;
  std::istringstream in3(v3);
  EXPECT_THROW(read_checkpoint(in3, ReadableVersions{1, 2}), CheckpointError);
}

TEST(CheckpointFormatTest, TruncationIsRejectedAtEveryLength) {
  const std::string bytes = checkpoint_bytes();
  for (std::size_t len : {std::size_t{0}, std::size_t{3}, std::size_t{6}, std::size_t{12}, bytes.size() / 2,
                          bytes.size() - 1}) {
    std::istringstream in(bytes.substr(0, len));
    EXPECT_THROW(read_checkpoint(in), CheckpointError) << "length " << len;
  }
}

TEST(CheckpointFormatTest, MissingFileIsReported) {
  EXPECT_THROW(load_checkpoint("/nonexistent/model.roph"), CheckpointError);
}

}  // namespace
}  // namespace ropnet
