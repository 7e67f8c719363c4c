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

#include "ropnet/model.hpp"

#include <array>

#include "ropnet/errors.hpp"

namespace ropnet {

namespace {

struct KindNames {
  ModelKind kind;
  std::string_view id;
  std::string_view display;
};

constexpr std::array<KindNames, 5> kKindNames{{
    {ModelKind::kBaselineLstm, "baseline_lstm", "LSTM Baseline"},
    {ModelKind::kTsMixer, "ts_mixer", "TS-Mixer"},
    {ModelKind::kHybridLstmMixer, "hybrid_lstm_mixer", "Hybrid LSTM + TS-Mixer"},
    {ModelKind::kHybridLstmMixerAttention, "hybrid_lstm_mixer_attention",
     "Hybrid LSTM + TS-Mixer + Attention"},
    {ModelKind::kAdvancedHybrid, "advanced_hybrid",
     "Advanced Hybrid (LSTM + Transformer + TS-Mixer + Attention)"},
}};

Tensor last_step(const Tensor& states) {
  const std::size_t batch = states.dim(0), steps = states.dim(1), width = states.dim(2);
  Tensor out({batch, width});
  for (std::size_t s = 0; s < batch; ++s)
    for (std::size_t c = 0; c < width; ++c) out(s, c) = states(s, steps - 1, c);
  return out;
}

Tensor scatter_last_step(const Tensor& grad, std::size_t steps) {
  const std::size_t batch = grad.dim(0), width = grad.dim(1);
  Tensor out({batch, steps, width});
  for (std::size_t s = 0; s < batch; ++s)
    for (std::size_t c = 0; c < width; ++c) out(s, steps - 1, c) = grad(s, c);
  return out;
}

bool uses_lstm(ModelKind kind) { return kind != ModelKind::kTsMixer; }

}  // namespace

std::string_view to_string(ModelKind kind) {
  for (const auto& entry : kKindNames)
    if (entry.kind == kind) return entry.id;
  return "unknown";
}

std::string_view display_name(ModelKind kind) {
  for (const auto& entry : kKindNames)
    if (entry.kind == kind) return entry.display;
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (const auto& entry : kKindNames)
    if (entry.id == name) return entry.kind;
  std::string known;
  for (const auto& entry : kKindNames) known += (known.empty() ? "" : ", ") + std::string(entry.id);
  throw ConfigError("unknown model kind '" + std::string(name) + "' (expected one of " + known + ")");
}

void ModelSpec::validate() const {
  if (input_features == 0) throw ConfigError("model spec: input_features must be positive");
  if (window_len == 0) throw ConfigError("model spec: window_len must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("model spec: dropout must lie in [0, 1)");
  if (!uses_lstm(kind)) return;
  if (lstm_hidden == 0) throw ConfigError("model spec: lstm_hidden must be positive");
  if (lstm_layers == 0) throw ConfigError("model spec: lstm_layers must be positive");
  if (kind == ModelKind::kAdvancedHybrid) {
    if (heads == 0) throw ConfigError("model spec: heads must be positive");
    if (lstm_hidden % heads != 0) {
      throw ConfigError("model spec: transformer model dimension " + std::to_string(lstm_hidden) +
                        " is not divisible by " + std::to_string(heads) + " heads");
    }
    if (ffn_dim == 0) throw ConfigError("model spec: ffn_dim must be positive");
  }
}

Model Model::build(const ModelSpec& spec, SeededRng& rng) {
  spec.validate();
  Model m;
  m.spec_ = spec;
  const std::size_t d = spec.input_features, h = spec.lstm_hidden;
  switch (spec.kind) {
    case ModelKind::kBaselineLstm:
      m.lstm_.emplace("lstm", d, h, spec.lstm_layers, spec.dropout, rng);
      m.head_.emplace("head", h, 1, rng);
      break;
    case ModelKind::kTsMixer:
      m.mixer_.emplace("mixer", MixerVariant::kStandalone, d, rng);
      break;
    case ModelKind::kHybridLstmMixer:
    case ModelKind::kHybridLstmMixerAttention:
    case ModelKind::kAdvancedHybrid:
      m.lstm_.emplace("lstm", d, h, spec.lstm_layers, 0.0, rng);
      if (spec.kind == ModelKind::kAdvancedHybrid) {
        m.transformer_.emplace("transformer", h, spec.heads, spec.ffn_dim, rng);
      }
      if (spec.kind != ModelKind::kHybridLstmMixer) m.pool_.emplace("pool", h, rng);
      m.mixer_.emplace("mixer", MixerVariant::kBranch, d, rng);
      m.fusion_.emplace("fusion", h, MixerBlock::kBranchOutput, rng);
      break;
  }
  return m;
}

Tensor Model::temporal_features(const Tensor& windows, ModelTape* tape, bool training,
                                SeededRng* dropout_rng) const {
  Tensor states = lstm_->forward(windows, tape ? &tape->lstm : nullptr, training, dropout_rng);
  if (transformer_) states = transformer_->forward(states, tape ? &tape->transformer : nullptr);
  if (pool_) return pool_->forward(states, tape ? &tape->pool : nullptr);
  return last_step(states);
}

Tensor Model::forward(const Tensor& windows, const Tensor& statics, ModelTape* tape, bool training,
                      SeededRng* dropout_rng) {
  const std::size_t d = spec_.input_features;
  if (windows.rank() != 3 || windows.dim(1) != spec_.window_len || windows.dim(2) != d) {
    throw DimensionError("model: expected windows [B x " + std::to_string(spec_.window_len) + " x " +
                         std::to_string(d) + "], got " + to_string(windows.shape()));
  }
  expect_shape(statics, {windows.dim(0), d}, "model statics");
  if (tape) {
    *tape = ModelTape{};
    tape->batch = windows.dim(0);
  }

  Tensor out;
  if (spec_.kind == ModelKind::kTsMixer) {
    out = mixer_->forward(statics, tape ? &tape->mixer : nullptr, training);
  } else if (spec_.kind == ModelKind::kBaselineLstm) {
    out = head_->forward(temporal_features(windows, tape, training, dropout_rng),
                         tape ? &tape->head : nullptr);
  } else {
    if (training && spec_.dropout > 0.0 && !dropout_rng) {
      throw ConfigError("model: training-mode dropout needs an RNG");
    }
    Tensor temporal = temporal_features(windows, tape, training, dropout_rng);
    Tensor mixed = mixer_->forward(statics, tape ? &tape->mixer : nullptr, training);
    // Independent masks on both halves are exactly dropout on the concatenation.
    SeededRng unused(0);
    SeededRng& rng = dropout_rng ? *dropout_rng : unused;
    temporal = dropout_apply(temporal, spec_.dropout, rng, training,
                             tape ? &tape->temporal_dropout : nullptr);
    mixed = dropout_apply(mixed, spec_.dropout, rng, training, tape ? &tape->static_dropout : nullptr);
    out = fusion_->forward(temporal, mixed, tape ? &tape->fusion : nullptr);
  }
  if (tape) tape->recorded = true;
  return out;
}

Tensor Model::predict(const Tensor& windows, const Tensor& statics) const {
  // Inference mode with no tape reads parameters only.
  return const_cast<Model*>(this)->forward(windows, statics, nullptr, false, nullptr);
}

void Model::backward(const ModelTape& tape, const Tensor& dout) {
  if (!tape.recorded) throw TapeError("model: backward without a recorded forward pass");
  expect_shape(dout, {tape.batch, 1}, "model backward");

  Tensor dtemporal;
  if (spec_.kind == ModelKind::kTsMixer) {
    mixer_->backward(tape.mixer, dout);
    return;
  }
  if (spec_.kind == ModelKind::kBaselineLstm) {
    dtemporal = head_->backward(tape.head, dout);
  } else {
    auto grads = fusion_->backward(tape.fusion, dout);
    mixer_->backward(tape.mixer, dropout_backward(tape.static_dropout, grads.statics));
    dtemporal = dropout_backward(tape.temporal_dropout, grads.temporal);
  }

  Tensor dstates = pool_ ? pool_->backward(tape.pool, dtemporal)
                         : scatter_last_step(dtemporal, spec_.window_len);
  if (transformer_) dstates = transformer_->backward(tape.transformer, dstates);
  lstm_->backward(tape.lstm, dstates);
}

ParamRefs Model::parameters() {
  ParamRefs out;
  if (lstm_) lstm_->collect(out);
  if (transformer_) transformer_->collect(out);
  if (pool_) pool_->collect(out);
  if (mixer_) mixer_->collect(out);
  if (fusion_) fusion_->collect(out);
  if (head_) head_->collect(out);
  return out;
}

std::vector<const Param*> Model::parameters() const {
  ParamRefs refs = const_cast<Model*>(this)->parameters();
  return {refs.begin(), refs.end()};
}

void Model::zero_grad() {
  for (Param* p : parameters()) p->zero_grad();
}

std::size_t Model::parameter_count() const {
  std::size_t total = 0;
  for (const Param* p : parameters())
    if (p->trainable) total += p->value.size();
  return total;
}

std::optional<Tensor> Model::attention_weights(const Tensor& windows) const {
  if (!pool_) return std::nullopt;
  Tensor states = lstm_->forward(windows, nullptr, false, nullptr);
  if (transformer_) states = transformer_->forward(states, nullptr);
  return pool_->attention_weights(states);
}

}  // namespace ropnet
