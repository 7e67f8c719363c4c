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

#ifndef ROPNET_CONFIG_HPP_
#define ROPNET_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ropnet/data_io.hpp"
#include "ropnet/model.hpp"
#include "ropnet/preprocess.hpp"
#include "ropnet/train.hpp"

namespace ropnet {

struct ConfigKey {
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
};

/// Every recognized key, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Human-readable table of all keys with their defaults.
std::string describe_config_keys();

/**
 * Flat `key = value` configuration. Blank lines and lines starting with '#'
 * are ignored. Unknown keys, malformed lines and duplicate keys raise
 * ConfigError; absent keys take their documented defaults.
 */
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig parse(std::istream& in, const std::string& source = "<config>");
  static RunConfig load(const std::filesystem::path& path);

  /// Throws ConfigError for an unknown key.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::size_t get_size(const std::string& key) const { return static_cast<std::size_t>(get_u64(key)); }
  bool get_bool(const std::string& key) const;
  /// Comma-separated list with surrounding whitespace trimmed; empty items dropped.
  std::vector<std::string> get_list(const std::string& key) const;

  ModelSpec model_spec(std::size_t input_features) const;
  TrainConfig train_config() const;
  SyntheticSpec synthetic_spec() const;
  PipelineOptions pipeline_options() const;
  DatasetSchema schema() const;
  std::vector<ModelKind> compare_models() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace ropnet

#endif  // ROPNET_CONFIG_HPP_
