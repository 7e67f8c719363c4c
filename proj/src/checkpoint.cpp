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

#include "ropnet/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "ropnet/errors.hpp"

namespace ropnet {

namespace {

constexpr std::uint32_t kMaxNameLength = 1u << 16;
constexpr std::uint64_t kMaxHeaderLength = 1ull << 30;

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes, sizeof(T));
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw CheckpointError(std::string("checkpoint truncated while reading ") + what);
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

std::string get_bytes(std::istream& in, std::uint64_t n, const char* what) {
  std::string s(n, '\0');
  if (n && !in.read(s.data(), static_cast<std::streamsize>(n))) {
    throw CheckpointError(std::string("checkpoint truncated while reading ") + what);
  }
  return s;
}

}  // namespace

nlohmann::json model_spec_to_json(const ModelSpec& spec) {
  return {{"kind", std::string(to_string(spec.kind))},
          {"input_features", spec.input_features},
          {"window_len", spec.window_len},
          {"lstm_hidden", spec.lstm_hidden},
          {"lstm_layers", spec.lstm_layers},
          {"heads", spec.heads},
          {"ffn_dim", spec.ffn_dim},
          {"dropout", spec.dropout}};
}

ModelSpec model_spec_from_json(const nlohmann::json& j) {
  ModelSpec spec;
  spec.kind = parse_model_kind(j.at("kind").get<std::string>());
  j.at("input_features").get_to(spec.input_features);
  j.at("window_len").get_to(spec.window_len);
  j.at("lstm_hidden").get_to(spec.lstm_hidden);
  j.at("lstm_layers").get_to(spec.lstm_layers);
  j.at("heads").get_to(spec.heads);
  j.at("ffn_dim").get_to(spec.ffn_dim);
  j.at("dropout").get_to(spec.dropout);
  return spec;
}

void write_checkpoint(std::ostream& out, const Model& model, const PreprocessorState& preprocessor) {
  const nlohmann::json header = {{"model", model_spec_to_json(model.spec())},
                                 {"preprocessor", preprocessor.to_json()}};
  const std::string text = header.dump();
  out.write(kCheckpointMagic, 4);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));

  const auto params = model.parameters();
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const Param* p : params) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p->value.rank()));
    for (std::size_t extent : p->value.shape()) put_le<std::uint64_t>(out, extent);
    for (double v : p->value.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw CheckpointError("failed writing checkpoint");
}

void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const PreprocessorState& preprocessor) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, model, preprocessor);
}

LoadedCheckpoint read_checkpoint(std::istream& in, const ReadableVersions& versions) {
  char magic[4];
  if (!in.read(magic, 4)) throw CheckpointError("checkpoint truncated while reading magic");
  if (std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw CheckpointError("not a ropnet checkpoint (bad magic bytes)");
  }
  const auto version = get_le<std::uint32_t>(in, "version");
  if (version < versions.oldest || version > versions.newest) {
    throw CheckpointError("incompatible checkpoint version " + std::to_string(version) +
                          " (this reader supports " + std::to_string(versions.oldest) + ".." +
                          std::to_string(versions.newest) + ")");
  }
  const auto header_len = get_le<std::uint64_t>(in, "header length");
  if (header_len > kMaxHeaderLength) throw CheckpointError("corrupt checkpoint: header length out of range");
  const std::string text = get_bytes(in, header_len, "header");

  ModelSpec spec;
  PreprocessorState pre;
  try {
    const auto header = nlohmann::json::parse(text);
    spec = model_spec_from_json(header.at("model"));
    pre = PreprocessorState::from_json(header.at("preprocessor"));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint header: ") + e.what());
  } catch (const Error& e) {
    throw CheckpointError(std::string("corrupt checkpoint header: ") + e.what());
  }

  SeededRng unused(0);
  LoadedCheckpoint loaded{Model::build(spec, unused), std::move(pre), version};
  std::map<std::string, Param*> by_name;
  for (Param* p : loaded.model.parameters()) by_name.emplace(p->name, p);

  const auto count = get_le<std::uint32_t>(in, "record count");
  if (count != by_name.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(count) + " records, model expects " +
                          std::to_string(by_name.size()));
  }
  for (std::uint32_t r = 0; r < count; ++r) {
    const auto name_len = get_le<std::uint32_t>(in, "record name length");
    if (name_len > kMaxNameLength) throw CheckpointError("corrupt checkpoint: record name too long");
    const std::string name = get_bytes(in, name_len, "record name");
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw CheckpointError("checkpoint record '" + name + "' is not a model parameter");
    Param& p = *it->second;
    const auto rank = get_le<std::uint32_t>(in, "record rank");
    if (rank != p.value.rank()) throw CheckpointError("checkpoint record '" + name + "' has the wrong rank");
    for (std::uint32_t a = 0; a < rank; ++a) {
      if (get_le<std::uint64_t>(in, "record extent") != p.value.dim(a)) {
        throw CheckpointError("checkpoint record '" + name + "' has the wrong shape");
      }
    }
    for (double& v : p.value.data()) v = std::bit_cast<double>(get_le<std::uint64_t>(in, "record values"));
    by_name.erase(it);
  }
  return loaded;
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace ropnet
