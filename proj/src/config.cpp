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

#include "ropnet/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ropnet/errors.hpp"

namespace ropnet {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"model.kind", "advanced_hybrid",
       "baseline_lstm | ts_mixer | hybrid_lstm_mixer | hybrid_lstm_mixer_attention | advanced_hybrid"},
      {"model.window_len", "1", "rows per input window"},
      {"model.lstm_hidden", "64", "LSTM hidden units (also the transformer width)"},
      {"model.lstm_layers", "2", "stacked LSTM layers"},
      {"model.heads", "4", "transformer attention heads"},
      {"model.ffn_dim", "128", "transformer feed-forward width"},
      {"train.lr", "0.001", "AdamW learning rate"},
      {"train.weight_decay", "1e-05", "AdamW decoupled weight decay"},
      {"train.batch_size", "64", "mini-batch size"},
      {"train.epochs", "100", "training epochs"},
      {"train.dropout", "0.2", "dropout rate"},
      {"train.beta1", "0.9", "Adam first-moment decay"},
      {"train.beta2", "0.999", "Adam second-moment decay"},
      {"train.eps", "1e-08", "Adam denominator epsilon"},
      {"train.seed", "42", "initialization, shuffling and dropout seed"},
      {"data.path", "", "input CSV; empty means use the synthetic generator"},
      {"data.target", "ROP", "target column"},
      {"data.features", "WOB,RPM,Torque,Standpipe Pressure,Flow Rate,Hook Load,Bit Depth,Hole Depth",
       "continuous input columns"},
      {"data.categorical", "", "categorical input columns (one-hot encoded)"},
      {"data.derived_features", "false", "add Specific Energy Ratio and Hydraulic Horsepower"},
      {"data.split_seed", "42", "80/20 train/test split seed"},
      {"data.synthetic.rows", "2000", "generated rows"},
      {"data.synthetic.noise_sigma", "1.2", "target noise standard deviation (ft/hr)"},
      {"data.synthetic.regimes", "4", "formation regimes"},
      {"data.synthetic.temporal_scale", "1", "multiplier on the lagged-feature coefficients"},
      {"data.synthetic.missing_fraction", "0", "fraction of feature cells blanked"},
      {"data.synthetic.seed", "42", "generator seed"},
      {"output.dir", "out", "artifact directory"},
      {"compare.models", "baseline_lstm,ts_mixer,hybrid_lstm_mixer,hybrid_lstm_mixer_attention,advanced_hybrid",
       "model kinds trained by compare"},
      {"explain.repeats", "5", "permutations per feature"},
      {"explain.samples", "200", "perturbed points for the local surrogate"},
      {"explain.radius", "0.5", "surrogate perturbation radius (scaled units)"},
      {"explain.anchor", "0", "test sample explained by the local surrogate"},
  };
  return keys;
}

std::string describe_config_keys() {
  std::size_t width = 0;
  for (const auto& k : config_keys()) width = std::max(width, k.key.size());
  std::ostringstream out;
  out << "Config keys (key = default):\n";
  for (const auto& k : config_keys()) {
    out << "  " << k.key << std::string(width - k.key.size(), ' ') << " = "
        << (k.default_value.empty() ? "\"\"" : std::string(k.default_value)) << "  " << k.help << '\n';
  }
  return out.str();
}

namespace {

const ConfigKey* find_key(std::string_view key) {
  for (const auto& k : config_keys()) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

RunConfig RunConfig::parse(std::istream& in, const std::string& source) {
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (cfg.has(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (find_key(key) == nullptr) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
}

std::string RunConfig::get_string(const std::string& key) const {
  const ConfigKey* k = find_key(key);
  if (k == nullptr) throw ConfigError("unknown config key '" + key + "'");
  const auto it = values_.find(key);
  return it != values_.end() ? it->second : std::string(k->default_value);
}

double RunConfig::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("'" + key + "' expects a number, got '" + s + "'");
  }
  return v;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const std::string s = get_string(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool RunConfig::get_bool(const std::string& key) const {
  std::string s = get_string(key);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + s + "'");
}

std::vector<std::string> RunConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ModelSpec RunConfig::model_spec(std::size_t input_features) const {
  ModelSpec spec;
  spec.kind = parse_model_kind(get_string("model.kind"));
  spec.input_features = input_features;
  spec.window_len = get_size("model.window_len");
  spec.lstm_hidden = get_size("model.lstm_hidden");
  spec.lstm_layers = get_size("model.lstm_layers");
  spec.heads = get_size("model.heads");
  spec.ffn_dim = get_size("model.ffn_dim");
  spec.dropout = get_double("train.dropout");
  spec.validate();
  return spec;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig cfg;
  cfg.learning_rate = get_double("train.lr");
  cfg.weight_decay = get_double("train.weight_decay");
  cfg.batch_size = get_size("train.batch_size");
  cfg.epochs = get_size("train.epochs");
  cfg.dropout = get_double("train.dropout");
  cfg.beta1 = get_double("train.beta1");
  cfg.beta2 = get_double("train.beta2");
  cfg.eps = get_double("train.eps");
  cfg.seed = get_u64("train.seed");
  cfg.validate();
  return cfg;
}

SyntheticSpec RunConfig::synthetic_spec() const {
  SyntheticSpec spec = SyntheticSpec::drilling_default();
  spec.n_rows = get_size("data.synthetic.rows");
  spec.noise_sigma = get_double("data.synthetic.noise_sigma");
  spec.regime_count = get_size("data.synthetic.regimes");
  spec.missing_fraction = get_double("data.synthetic.missing_fraction");
  spec.seed = get_u64("data.synthetic.seed");
  const double scale = get_double("data.synthetic.temporal_scale");
  for (double& c : spec.lag1_coeffs) c *= scale;
  for (double& c : spec.lag2_coeffs) c *= scale;
  spec.validate();
  return spec;
}

PipelineOptions RunConfig::pipeline_options() const {
  PipelineOptions opts;
  opts.window_len = get_size("model.window_len");
  opts.split_seed = get_u64("data.split_seed");
  opts.derived_features = get_bool("data.derived_features");
  if (opts.window_len == 0) throw ConfigError("model.window_len must be at least 1");
  return opts;
}

DatasetSchema RunConfig::schema() const {
  const DatasetSchema defaults = DatasetSchema::drilling_default();
  auto unit_of = [&](const std::string& name) -> std::string {
    for (const auto& f : defaults.features) {
      if (f.name == name) return f.unit;
    }
    return "";
  };
  DatasetSchema schema;
  for (const auto& name : get_list("data.features")) {
    schema.features.push_back({name, unit_of(name), FeatureKind::kContinuous});
  }
  for (const auto& name : get_list("data.categorical")) {
    schema.features.push_back({name, "", FeatureKind::kCategorical});
  }
  const std::string target = get_string("data.target");
  schema.features.push_back({target, unit_of(target), FeatureKind::kTarget});
  schema.validate();
  return schema;
}

std::vector<ModelKind> RunConfig::compare_models() const {
  std::vector<ModelKind> kinds;
  for (const auto& name : get_list("compare.models")) kinds.push_back(parse_model_kind(name));
  if (kinds.empty()) throw ConfigError("compare.models lists no models");
  return kinds;
}

}  // namespace ropnet
