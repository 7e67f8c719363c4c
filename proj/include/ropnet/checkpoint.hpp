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

#ifndef ROPNET_CHECKPOINT_HPP_
#define ROPNET_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "json.hpp"
#include "ropnet/model.hpp"
#include "ropnet/preprocess.hpp"

namespace ropnet {

/**
 * Checkpoint layout, all integers little-endian:
 *
 *   "ROPH"                 4-byte magic
 *   u32 version            currently 1
 *   u64 header length      followed by that many bytes of UTF-8 JSON
 *                          {"model": ModelSpec, "preprocessor": PreprocessorState}
 *   u32 record count
 *   record*                u32 name length, UTF-8 name, u32 rank,
 *                          rank x u64 extents, IEEE-754 binary64 values
 *
 * Records cover every parameter, batch-norm running statistics included.
 */
inline constexpr char kCheckpointMagic[4] = {'R', 'O', 'P', 'H'};
inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::uint32_t kOldestReadableVersion = 1;

nlohmann::json model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const nlohmann::json& j);

struct LoadedCheckpoint {
  Model model;
  PreprocessorState preprocessor;
  std::uint32_t version = 0;
};

void write_checkpoint(std::ostream& out, const Model& model, const PreprocessorState& preprocessor);
void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const PreprocessorState& preprocessor);

/// Version numbers a reader accepts.
struct ReadableVersions {
  std::uint32_t oldest = kOldestReadableVersion;
  std::uint32_t newest = kCheckpointVersion;
};

/// Throws CheckpointError on bad magic, a version outside `versions`,
/// truncation, or records that do not match the model the header describes.
LoadedCheckpoint read_checkpoint(std::istream& in, const ReadableVersions& versions = {});
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ropnet

#endif  // ROPNET_CHECKPOINT_HPP_
