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

#include <map>

#include "layer_checks.hpp"
#include "ropnet/errors.hpp"
#include "ropnet/model.hpp"

namespace ropnet {
namespace {

ModelSpec default_spec(ModelKind kind) {
  ModelSpec spec;
  spec.kind = kind;
  spec.input_features = 8;
  return spec;
}

// Independent enumeration of trainable scalars, layer by layer.
std::size_t expected_parameters(ModelKind kind, std::size_t d) {
  const std::size_t H = 64;
  auto linear = [](std::size_t in, std::size_t out) { return in * out + out; };
  auto lstm_layer = [](std::size_t in, std::size_t h) { return 4 * (h * in + h * h + h); };
  const std::size_t lstm = lstm_layer(d, H) + lstm_layer(H, H);
  const std::size_t branch = linear(d, 128) + linear(128, 64);
  const std::size_t fusion = linear(H + 64, 1);
  const std::size_t pool = H;
  const std::size_t encoder = 4 * H * H + 2 * (2 * H) + linear(H, 128) + linear(128, H);
  switch (kind) {
    case ModelKind::kBaselineLstm:
      return lstm + linear(H, 1);
    case ModelKind::kTsMixer:
      return linear(d, 128) + 2 * 128 + 4 * (linear(128, 128) + 2 * 128) + linear(128, 1);
    case ModelKind::kHybridLstmMixer:
      return lstm + branch + fusion;
    case ModelKind::kHybridLstmMixerAttention:
      return lstm + pool + branch + fusion;
    case ModelKind::kAdvancedHybrid:
      return lstm + encoder + pool + branch + fusion;
  }
  return 0;
}

TEST(ModelTest, ParameterCountsMatchEnumeration) {
  for (ModelKind kind : kAllModelKinds) {
    SeededRng rng(42);
    const Model model = Model::build(default_spec(kind), rng);
    EXPECT_EQ(model.parameter_count(), expected_parameters(kind, 8)) << to_string(kind);
  }
}

TEST(ModelTest, HeadlineCountsForEightInputs) {
  SeededRng rng(42);
  EXPECT_EQ(Model::build(default_spec(ModelKind::kBaselineLstm), rng).parameter_count(), 51777u);
  SeededRng rng2(42);
  MixerBlock branch("mixer", MixerVariant::kBranch, 8, rng2);
  ParamRefs params;
  branch.collect(params);
  std::size_t total = 0;
  for (const Param* p : params) total += p->value.size();
  EXPECT_EQ(total, 9408u);
}

TEST(ModelTest, KindNamesRoundTrip) {
  for (ModelKind kind : kAllModelKinds) EXPECT_EQ(parse_model_kind(to_string(kind)), kind);
  EXPECT_THROW(parse_model_kind("transformer_only"), ConfigError);
}

TEST(ModelTest, SpecValidation) {
  ModelSpec spec = default_spec(ModelKind::kAdvancedHybrid);
  spec.heads = 5;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = default_spec(ModelKind::kHybridLstmMixer);
  spec.input_features = 0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = default_spec(ModelKind::kBaselineLstm);
  spec.dropout = 1.0;
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(ModelTest, BuildIsDeterministic) {
  for (ModelKind kind : kAllModelKinds) {
    SeededRng a(7), b(7);
    Model ma = Model::build(default_spec(kind), a);
    Model mb = Model::build(default_spec(kind), b);
    const auto pa = ma.parameters();
    const auto pb = mb.parameters();
    ASSERT_EQ(pa.size(), pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      EXPECT_EQ(pa[i]->name, pb[i]->name);
      EXPECT_EQ(pa[i]->value, pb[i]->value);
    }
  }
}

TEST(ModelTest, ParameterNamesAreUnique) {
  for (ModelKind kind : kAllModelKinds) {
    SeededRng rng(1);
    Model model = Model::build(default_spec(kind), rng);
    std::map<std::string, int> seen;
    for (const Param* p : model.parameters()) EXPECT_EQ(seen[p->name]++, 0) << p->name;
  }
}

TEST(ModelTest, PredictShapesAndInputChecks) {
  for (ModelKind kind : kAllModelKinds) {
    ModelSpec spec = default_spec(kind);
    spec.window_len = 4;
    SeededRng rng(3);
    const Model model = Model::build(spec, rng);
    const Tensor windows = oracle::random_tensor(rng, {5, 4, 8});
    const Tensor statics = oracle::random_tensor(rng, {5, 8});
    EXPECT_EQ(model.predict(windows, statics).shape(), (Shape{5, 1}));
    EXPECT_THROW(model.predict(oracle::random_tensor(rng, {5, 3, 8}), statics), DimensionError);
    EXPECT_THROW(model.predict(windows, oracle::random_tensor(rng, {5, 7})), DimensionError);
  }
}

TEST(ModelTest, PredictDoesNotTouchRunningStatistics) {
  SeededRng rng(3);
  const Model model = Model::build(default_spec(ModelKind::kTsMixer), rng);
  std::vector<Tensor> before;
  for (const Param* p : model.parameters()) before.push_back(p->value);
  model.predict(oracle::random_tensor(rng, {6, 1, 8}), oracle::random_tensor(rng, {6, 8}));
  const auto after = model.parameters();
  for (std::size_t i = 0; i < after.size(); ++i) EXPECT_EQ(after[i]->value, before[i]);
}

TEST(ModelTest, AttentionWeightsOnlyForPoolingKinds) {
  for (ModelKind kind : kAllModelKinds) {
    ModelSpec spec = default_spec(kind);
    spec.window_len = 3;
    SeededRng rng(2);
    const Model model = Model::build(spec, rng);
    const auto weights = model.attention_weights(oracle::random_tensor(rng, {2, 3, 8}));
    const bool pooled = kind == ModelKind::kHybridLstmMixerAttention || kind == ModelKind::kAdvancedHybrid;
    ASSERT_EQ(weights.has_value(), pooled);
    if (pooled) {
      for (std::size_t s = 0; s < 2; ++s) {
        EXPECT_NEAR((*weights)(s, 0) + (*weights)(s, 1) + (*weights)(s, 2), 1.0, 1e-12);
      }
    }
  }
}

class ModelGradientTest : public ::testing::TestWithParam<ModelKind> {};

TEST_P(ModelGradientTest, EndToEndGradientsMatchCentralDifferences) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const oracle::GradCheck check = oracle::model_gradient(std::string(to_string(GetParam())), seed);
    EXPECT_GT(check.checked, 0u);
    EXPECT_LE(check.skipped * 10, check.checked);
    EXPECT_LT(check.max_rel_error, 1e-6) << "seed " << seed << ": " << check.worst;
  }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, ModelGradientTest, ::testing::ValuesIn(kAllModelKinds),
                         [](const auto& info) { return std::string(to_string(info.param)); });

}  // namespace
}  // namespace ropnet
