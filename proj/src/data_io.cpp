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

#include "ropnet/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ropnet/errors.hpp"
#include "ropnet/rng.hpp"

namespace ropnet {

namespace {

constexpr std::size_t kDrillingFeatures = 8;
constexpr std::size_t kOperationalFeatures = 6;
constexpr std::size_t kBurnIn = 50;

std::vector<std::vector<std::string>> parse_records(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (quoted) throw DataError("csv: unterminated quoted field");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

bool is_missing_token(const std::string& cell) { return cell.empty() || cell == "NaN"; }

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  if (is_missing_token(cell)) return kMissing;
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw DataError("csv: cannot parse '" + cell + "' as a number at row " + std::to_string(row) +
                    " (line " + std::to_string(row + 1) + "), column \"" + column + "\"");
  }
  return value;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

DatasetSchema DatasetSchema::drilling_default() {
  return DatasetSchema{{
      {"WOB", "klbf", FeatureKind::kContinuous},
      {"RPM", "rev/min", FeatureKind::kContinuous},
      {"Torque", "klbf-ft", FeatureKind::kContinuous},
      {"Standpipe Pressure", "psi", FeatureKind::kContinuous},
      {"Flow Rate", "gal/min", FeatureKind::kContinuous},
      {"Hook Load", "klbf", FeatureKind::kContinuous},
      {"Bit Depth", "ft", FeatureKind::kContinuous},
      {"Hole Depth", "ft", FeatureKind::kContinuous},
      {"ROP", "ft/hr", FeatureKind::kTarget},
  }};
}

void DatasetSchema::validate() const {
  std::set<std::string> seen;
  std::size_t targets = 0;
  for (const auto& f : features) {
    if (f.name.empty()) throw ConfigError("schema: empty feature name");
    if (!seen.insert(f.name).second) throw ConfigError("schema: duplicate feature name '" + f.name + "'");
    if (f.kind == FeatureKind::kTarget) ++targets;
  }
  if (targets != 1) {
    throw ConfigError("schema: expected exactly one target column, found " + std::to_string(targets));
  }
}

const FeatureDescriptor& DatasetSchema::target() const {
  for (const auto& f : features)
    if (f.kind == FeatureKind::kTarget) return f;
  throw ConfigError("schema: no target column");
}

std::vector<std::string> DatasetSchema::names(FeatureKind kind) const {
  std::vector<std::string> out;
  for (const auto& f : features)
    if (f.kind == kind) out.push_back(f.name);
  return out;
}

std::size_t RawTable::rows() const {
  if (!numeric.empty()) return numeric.front().size();
  if (!categorical.empty()) return categorical.front().size();
  return target.size();
}

const std::vector<double>& RawTable::numeric_column(const std::string& name) const {
  if (name == target_name && has_target()) return target;
  for (std::size_t i = 0; i < numeric_names.size(); ++i)
    if (numeric_names[i] == name) return numeric[i];
  throw DataError("table has no numeric column \"" + name + "\"");
}

LoadResult read_csv(std::istream& in, const DatasetSchema& schema, bool require_target) {
  schema.validate();
  auto records = parse_records(in);
  if (records.empty()) throw DataError("csv: missing header row");

  std::vector<std::string> header;
  for (const auto& h : records.front()) header.push_back(trim(h));
  if (!header.empty() && header.front().rfind("\xEF\xBB\xBF", 0) == 0) header.front().erase(0, 3);
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) position.emplace(header[i], i);

  LoadResult result;
  RawTable& table = result.table;
  std::vector<std::size_t> numeric_pos, categorical_pos;
  std::optional<std::size_t> target_pos;
  std::vector<std::string> missing;
  std::set<std::string> used;
  for (const auto& f : schema.features) {
    const auto it = position.find(f.name);
    if (it == position.end()) {
      if (f.kind == FeatureKind::kTarget && !require_target) continue;
      missing.push_back(f.name);
      continue;
    }
    used.insert(f.name);
    switch (f.kind) {
      case FeatureKind::kContinuous:
        table.numeric_names.push_back(f.name);
        numeric_pos.push_back(it->second);
        break;
      case FeatureKind::kCategorical:
        table.categorical_names.push_back(f.name);
        categorical_pos.push_back(it->second);
        break;
      case FeatureKind::kTarget:
        target_pos = it->second;
        break;
    }
  }
  table.target_name = schema.target().name;
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + ("\"" + m + "\"");
    throw DataError("csv: schema columns missing from header: " + list);
  }
  for (const auto& h : header) {
    if (!used.count(h)) result.warnings.push_back("ignoring column \"" + h + "\" not in the schema");
  }

  const std::size_t rows = records.size() - 1;
  table.numeric.assign(numeric_pos.size(), std::vector<double>(rows));
  table.categorical.assign(categorical_pos.size(), std::vector<std::string>(rows));
  if (target_pos) table.target.assign(rows, kMissing);
  for (std::size_t r = 0; r < rows; ++r) {
    auto& rec = records[r + 1];
    if (rec.size() != header.size()) {
      throw DataError("csv: row " + std::to_string(r + 1) + " has " + std::to_string(rec.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < numeric_pos.size(); ++c) {
      table.numeric[c][r] = parse_number(trim(rec[numeric_pos[c]]), r + 1, table.numeric_names[c]);
    }
    for (std::size_t c = 0; c < categorical_pos.size(); ++c) {
      const std::string cell = trim(rec[categorical_pos[c]]);
      table.categorical[c][r] = cell == "NaN" ? std::string() : cell;
    }
    if (target_pos) table.target[r] = parse_number(trim(rec[*target_pos]), r + 1, table.target_name);
  }
  return result;
}

LoadResult load_csv(const std::filesystem::path& path, const DatasetSchema& schema,
                    bool require_target) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file " + path.string());
  return read_csv(in, schema, require_target);
}

std::string format_double(double v) {
  if (is_missing(v)) return "";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const RawTable& table) {
  std::vector<std::string> header = table.numeric_names;
  header.insert(header.end(), table.categorical_names.begin(), table.categorical_names.end());
  if (table.has_target()) header.push_back(table.target_name);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << quote_if_needed(header[i]);
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    bool first = true;
    auto sep = [&] {
      if (!first) out << ',';
      first = false;
    };
    for (const auto& col : table.numeric) {
      sep();
      out << format_double(col[r]);
    }
    for (const auto& col : table.categorical) {
      sep();
      out << quote_if_needed(col[r]);
    }
    if (table.has_target()) {
      sep();
      out << format_double(table.target[r]);
    }
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const RawTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_csv(out, table);
}

SyntheticSpec SyntheticSpec::drilling_default() {
  SyntheticSpec spec;
  spec.static_coeffs = {4.0, 3.0, -2.0, 1.5, 2.0, -1.0, 0.0, 0.0};
  spec.lag1_coeffs = {3.0, 2.0, -1.5, 0.0, 1.0, 0.0, 0.0, 0.0};
  spec.lag2_coeffs = {2.0, 0.0, 0.0, 1.0, 0.0, 0.5, 0.0, 0.0};
  return spec;
}

SyntheticSpec SyntheticSpec::single_signal(std::size_t feature, double coefficient, double noise_sigma) {
  SyntheticSpec spec;
  spec.static_coeffs.assign(kDrillingFeatures, 0.0);
  spec.lag1_coeffs.assign(kDrillingFeatures, 0.0);
  spec.lag2_coeffs.assign(kDrillingFeatures, 0.0);
  if (feature >= kDrillingFeatures) throw ConfigError("single_signal: feature index out of range");
  spec.static_coeffs[feature] = coefficient;
  spec.noise_sigma = noise_sigma;
  spec.regime_count = 1;
  spec.regime_offset_scale = 0.0;
  spec.regime_shift_scale = 0.0;
  spec.cross_correlation = 0.0;
  return spec;
}

void SyntheticSpec::validate() const {
  if (n_rows < 100) throw ConfigError("synthetic: n_rows must be at least 100");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ConfigError("synthetic: noise_sigma must be finite and non-negative");
  }
  if (regime_count == 0 || regime_count > n_rows) throw ConfigError("synthetic: regime_count must lie in [1, n_rows]");
  for (const auto* coeffs : {&static_coeffs, &lag1_coeffs, &lag2_coeffs}) {
    if (!coeffs->empty() && coeffs->size() != kDrillingFeatures) {
      throw ConfigError("synthetic: coefficient vectors need exactly 8 entries");
    }
  }
  if (!(std::abs(ar_coefficient) < 1.0)) throw ConfigError("synthetic: |ar_coefficient| must be below 1");
  if (!(cross_correlation >= 0.0 && cross_correlation <= 1.0)) {
    throw ConfigError("synthetic: cross_correlation must lie in [0, 1]");
  }
  if (!(missing_fraction >= 0.0 && missing_fraction < 0.5)) {
    throw ConfigError("synthetic: missing_fraction must lie in [0, 0.5)");
  }
}

nlohmann::json GroundTruth::to_json() const {
  nlohmann::json j;
  j["generator"] = "ropnet-synthetic-drilling";
  j["formula"] =
      "ROP_t = intercept + static.u_t + lag1.u_{t-1} + lag2.u_{t-2} + regime_offset[r_t] + "
      "N(0, noise_sigma^2), u = (x - center) / scale";
  j["n_rows"] = spec.n_rows;
  j["seed"] = spec.seed;
  j["noise_sigma"] = spec.noise_sigma;
  j["bayes_mse"] = bayes_mse();
  j["intercept"] = spec.intercept;
  j["feature_names"] = feature_names;
  j["centers"] = centers;
  j["scales"] = scales;
  j["static_coeffs"] = spec.static_coeffs;
  j["lag1_coeffs"] = spec.lag1_coeffs;
  j["lag2_coeffs"] = spec.lag2_coeffs;
  j["regime_count"] = spec.regime_count;
  j["regime_starts"] = regime_starts;
  j["regime_offsets"] = regime_offsets;
  j["regime_shift_scale"] = spec.regime_shift_scale;
  j["ar_coefficient"] = spec.ar_coefficient;
  j["cross_correlation"] = spec.cross_correlation;
  j["missing_fraction"] = spec.missing_fraction;
  return j;
}

SyntheticData generate_synthetic(const SyntheticSpec& input) {
  input.validate();
  SyntheticSpec spec = input;
  for (auto* coeffs : {&spec.static_coeffs, &spec.lag1_coeffs, &spec.lag2_coeffs}) {
    if (coeffs->empty()) coeffs->assign(kDrillingFeatures, 0.0);
  }
  SeededRng root(spec.seed);
  SeededRng regime_rng = root.split(1);
  SeededRng feature_rng = root.split(2);
  SeededRng noise_rng = root.split(3);
  SeededRng missing_rng = root.split(4);

  const std::size_t n = spec.n_rows;
  const std::size_t total = n + kBurnIn;
  const DatasetSchema schema = DatasetSchema::drilling_default();

  GroundTruth truth;
  truth.feature_names = schema.names(FeatureKind::kContinuous);
  truth.centers = {25.0, 120.0, 12.0, 3000.0, 600.0, 250.0, 0.0, 0.0};
  truth.scales = {6.0, 25.0, 3.0, 400.0, 80.0, 30.0, 1.0, 1.0};

  std::vector<std::vector<double>> shifts(spec.regime_count, std::vector<double>(kOperationalFeatures));
  truth.regime_offsets.resize(spec.regime_count);
  for (std::size_t r = 0; r < spec.regime_count; ++r) {
    for (double& s : shifts[r]) s = spec.regime_shift_scale * regime_rng.normal();
    truth.regime_offsets[r] = spec.regime_offset_scale * regime_rng.normal();
    truth.regime_starts.push_back(r * n / spec.regime_count);
  }
  auto regime_of = [&](std::size_t step) -> std::size_t {
    if (step < kBurnIn) return 0;
    return (step - kBurnIn) * spec.regime_count / n;
  };

  // Standardized features for every step, burn-in included.
  std::vector<std::vector<double>> u(total, std::vector<double>(kDrillingFeatures));
  std::vector<double> latent(kOperationalFeatures, 0.0);
  const double phi = spec.ar_coefficient;
  const double innovation = std::sqrt(1.0 - phi * phi);
  const double common_weight = std::sqrt(spec.cross_correlation);
  const double own_weight = std::sqrt(1.0 - spec.cross_correlation);
  std::vector<double> hole_depth(total), bit_depth(total);
  double depth = 1000.0;
  for (std::size_t t = 0; t < total; ++t) {
    const double common = feature_rng.normal();
    for (std::size_t j = 0; j < kOperationalFeatures; ++j) {
      latent[j] = phi * latent[j] + innovation * (common_weight * common + own_weight * feature_rng.normal());
      u[t][j] = latent[j] + shifts[regime_of(t)][j];
    }
    depth += 0.5 + 0.25 * feature_rng.uniform();
    hole_depth[t] = depth;
    bit_depth[t] = depth - 0.2 * std::abs(feature_rng.normal());
  }
  const double first = hole_depth[kBurnIn], last = hole_depth[total - 1];
  const double depth_center = 0.5 * (first + last);
  const double depth_scale = std::max((last - first) / std::sqrt(12.0), 1e-9);
  truth.centers[6] = truth.centers[7] = depth_center;
  truth.scales[6] = truth.scales[7] = depth_scale;
  for (std::size_t t = 0; t < total; ++t) {
    u[t][6] = (bit_depth[t] - depth_center) / depth_scale;
    u[t][7] = (hole_depth[t] - depth_center) / depth_scale;
  }

  SyntheticData data;
  RawTable& out = data.table;
  out.numeric_names = truth.feature_names;
  out.numeric.assign(kDrillingFeatures, std::vector<double>(n));
  out.target_name = schema.target().name;
  out.target.resize(n);
  truth.noiseless_target.resize(n);
  for (std::size_t row = 0; row < n; ++row) {
    const std::size_t t = row + kBurnIn;
    double signal = spec.intercept + truth.regime_offsets[regime_of(t)];
    for (std::size_t j = 0; j < kDrillingFeatures; ++j) {
      signal += spec.static_coeffs[j] * u[t][j] + spec.lag1_coeffs[j] * u[t - 1][j] +
                spec.lag2_coeffs[j] * u[t - 2][j];
      out.numeric[j][row] = j < kOperationalFeatures ? truth.centers[j] + truth.scales[j] * u[t][j]
                            : j == 6                 ? bit_depth[t]
                                                     : hole_depth[t];
    }
    truth.noiseless_target[row] = signal;
    out.target[row] = signal + spec.noise_sigma * noise_rng.normal();
  }
  if (spec.missing_fraction > 0.0) {
    for (auto& col : out.numeric)
      for (double& v : col)
        if (missing_rng.uniform() < spec.missing_fraction) v = kMissing;
  }
  truth.spec = spec;
  data.truth = std::move(truth);
  return data;
}

}  // namespace ropnet
