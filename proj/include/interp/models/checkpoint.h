// interp/models/checkpoint.h

// Copyright 2026 The interp Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef INTERP_MODELS_CHECKPOINT_H_
#define INTERP_MODELS_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "interp/models/model.h"

namespace interp::models {

// Checkpoint layout, all integers little-endian:
//   "INTPCKPT"                       8-byte magic
//   u8    format version
//   u32   descriptor length, then the descriptor as JSON text
//         (architecture, dims, labels, vocabulary)
//   u32   array count, then per array:
//           u32 name length, name, u32 rows, u32 cols, rows*cols f64 values
//   u32   CRC-32 of every preceding byte
inline constexpr char kCheckpointMagic[] = "INTPCKPT";
inline constexpr std::uint8_t kCheckpointVersion = 1;

std::string SerializeCheckpoint(const Model& model);
/// Throws VersionError on a foreign version byte and ChecksumError on a bad
/// magic, truncation or checksum mismatch.
std::unique_ptr<Model> DeserializeCheckpoint(const std::string& bytes);

void SaveCheckpoint(const Model& model, const std::filesystem::path& path);
std::unique_ptr<Model> LoadCheckpoint(const std::filesystem::path& path);

}  // namespace interp::models

#endif  // INTERP_MODELS_CHECKPOINT_H_
