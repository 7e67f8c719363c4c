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

#ifndef ROPNET_MODEL_HPP_
#define ROPNET_MODEL_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "ropnet/layers/attention_pool.hpp"
#include "ropnet/layers/dropout.hpp"
#include "ropnet/layers/fusion.hpp"
#include "ropnet/layers/linear.hpp"
#include "ropnet/layers/lstm.hpp"
#include "ropnet/layers/mixer.hpp"
#include "ropnet/layers/transformer.hpp"

namespace ropnet {

enum class ModelKind {
  kBaselineLstm,
  kTsMixer,
  kHybridLstmMixer,
  kHybridLstmMixerAttention,
  kAdvancedHybrid,
};

inline constexpr ModelKind kAllModelKinds[] = {
    ModelKind::kBaselineLstm, ModelKind::kTsMixer, ModelKind::kHybridLstmMixer,
    ModelKind::kHybridLstmMixerAttention, ModelKind::kAdvancedHybrid};

/// Stable identifier used in configs, file names and checkpoints.
std::string_view to_string(ModelKind kind);
/// Throws ConfigError for an unknown name.
ModelKind parse_model_kind(std::string_view name);
/// Human-readable row label for comparison tables.
std::string_view display_name(ModelKind kind);

struct ModelSpec {
  ModelKind kind = ModelKind::kAdvancedHybrid;
  std::size_t input_features = 0;
  std::size_t window_len = 1;
  std::size_t lstm_hidden = 64;
  std::size_t lstm_layers = 2;
  std::size_t heads = 4;
  std::size_t ffn_dim = 128;
  double dropout = 0.2;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Cached activations of one model forward pass.
struct ModelTape {
  LstmStack::Tape lstm;
  TransformerEncoderBlock::Tape transformer;
  AttentionPool::Tape pool;
  MixerBlock::Tape mixer;
  DropoutMask temporal_dropout;
  DropoutMask static_dropout;
  FusionHead::Tape fusion;
  Linear::Tape head;
  std::size_t batch = 0;
  bool recorded = false;
};

/**
 * One of the five architectures:
 *
 *   BaselineLstm             LSTM(2x64, dropout between layers) -> h_T -> Dense(1)
 *   TsMixer                  standalone mixer on the static vector
 *   HybridLstmMixer          [h_T || mixer(static)] -> dropout -> Dense(1)
 *   HybridLstmMixerAttention [pool(LSTM states) || mixer(static)] -> dropout -> Dense(1)
 *   AdvancedHybrid           [pool(encoder(LSTM states)) || mixer(static)] -> dropout -> Dense(1)
 *
 * The static vector is the window's last time step.
 */
class Model {
 public:
  /// Builds and initializes every layer from `rng` in a fixed order.
  static Model build(const ModelSpec& spec, SeededRng& rng);

  const ModelSpec& spec() const { return spec_; }

  /// windows [B x L x D], statics [B x D] -> predictions [B x 1].
  /// Training mode draws dropout masks from `dropout_rng` and uses
  /// batch-norm batch statistics (updating the running estimates).
  Tensor forward(const Tensor& windows, const Tensor& statics, ModelTape* tape, bool training,
                 SeededRng* dropout_rng);
  /// Inference-mode forward; never mutates the model.
  Tensor predict(const Tensor& windows, const Tensor& statics) const;

  /// Accumulates parameter gradients for d(loss)/d(prediction) = dout.
  void backward(const ModelTape& tape, const Tensor& dout);

  ParamRefs parameters();
  std::vector<const Param*> parameters() const;
  void zero_grad();
  /// Trainable scalar count.
  std::size_t parameter_count() const;

  /// Time-step attention weights [B x L] of the pooling layer, for kinds
  /// that have one.
  std::optional<Tensor> attention_weights(const Tensor& windows) const;

 private:
  Model() = default;
  Tensor temporal_features(const Tensor& windows, ModelTape* tape, bool training,
                           SeededRng* dropout_rng) const;

  ModelSpec spec_;
  std::optional<LstmStack> lstm_;
  std::optional<TransformerEncoderBlock> transformer_;
  std::optional<AttentionPool> pool_;
  std::optional<MixerBlock> mixer_;
  std::optional<FusionHead> fusion_;
  std::optional<Linear> head_;
};

}  // namespace ropnet

#endif  // ROPNET_MODEL_HPP_
