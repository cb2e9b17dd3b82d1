// src/models/checkpoint.cc

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

#include "interp/models/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "interp/errors.h"
#include "interp/models/architectures.h"

namespace interp::models {
namespace {

constexpr std::size_t kMagicSize = sizeof(kCheckpointMagic) - 1;

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t Crc(const std::string& bytes, std::size_t length) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(length)));
}

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  std::uint64_t Uint(int width) {
    Need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::string Bytes(std::size_t n) {
    Need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == end_; }

 private:
  void Need(std::size_t n) const {
    if (end_ - pos_ < n) throw ChecksumError("checkpoint is truncated");
  }

  const std::string& bytes_;
  std::size_t end_;
  std::size_t pos_ = kMagicSize + 1;
};

}  // namespace

std::string SerializeCheckpoint(const Model& model) {
  const ModelSpec& spec = model.spec();
  nlohmann::ordered_json descriptor;
  descriptor["architecture"] = ArchitectureName(spec.arch);
  descriptor["task"] = TaskName(model.task());
  descriptor["embedding_dim"] = spec.embedding_dim;
  descriptor["hidden_dim"] = spec.hidden_dim;
  descriptor["labels"] = spec.labels;
  descriptor["vocabulary"] = spec.vocab.tokens();
  const std::string text = descriptor.dump();

  std::string out(kCheckpointMagic, kMagicSize);
  out.push_back(static_cast<char>(kCheckpointVersion));
  PutU32(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  PutU32(out, static_cast<std::uint32_t>(model.parameters().size()));
  for (const auto& [name, value] : model.parameters()) {
    PutU32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    PutU32(out, static_cast<std::uint32_t>(value.rows()));
    PutU32(out, static_cast<std::uint32_t>(value.cols()));
    for (double v : value.data()) PutU64(out, std::bit_cast<std::uint64_t>(v));
  }
  PutU32(out, Crc(out, out.size()));
  return out;
}

std::unique_ptr<Model> DeserializeCheckpoint(const std::string& bytes) {
  if (bytes.size() < kMagicSize + 1 ||
      bytes.compare(0, kMagicSize, kCheckpointMagic) != 0) {
    throw ChecksumError("not a checkpoint file (bad magic)");
  }
  const auto version = static_cast<std::uint8_t>(bytes[kMagicSize]);
  if (version != kCheckpointVersion) {
    throw VersionError("checkpoint format version " + std::to_string(version) +
                       " is not supported (expected " +
                       std::to_string(kCheckpointVersion) + ")");
  }
  if (bytes.size() < kMagicSize + 1 + 4) {
    throw ChecksumError("checkpoint is truncated");
  }
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) {
    stored |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[body + i]))
              << (8 * i);
  }
  if (stored != Crc(bytes, body)) {
    throw ChecksumError("checkpoint checksum mismatch");
  }

  Reader in(bytes, body);
  nlohmann::json descriptor;
  try {
    descriptor = nlohmann::json::parse(in.Bytes(in.Uint(4)));
  } catch (const nlohmann::json::exception& e) {
    throw ChecksumError(std::string("checkpoint descriptor unreadable: ") + e.what());
  }
  ModelSpec spec;
  try {
    spec.arch = ParseArchitecture(descriptor.at("architecture").get<std::string>());
    spec.embedding_dim = descriptor.at("embedding_dim").get<std::size_t>();
    spec.hidden_dim = descriptor.at("hidden_dim").get<std::size_t>();
    spec.labels = descriptor.at("labels").get<std::vector<std::string>>();
    spec.vocab = Vocabulary::FromTokens(
        descriptor.at("vocabulary").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("checkpoint descriptor: ") + e.what());
  }
  auto model = CreateEmptyModel(std::move(spec));

  const std::uint64_t count = in.Uint(4);
  if (count != model->parameters().size()) {
    throw SchemaError("checkpoint holds " + std::to_string(count) +
                      " arrays, architecture expects " +
                      std::to_string(model->parameters().size()));
  }
  for (std::uint64_t a = 0; a < count; ++a) {
    const std::string name = in.Bytes(in.Uint(4));
    const std::uint64_t rows = in.Uint(4);
    const std::uint64_t cols = in.Uint(4);
    ad::Tensor& target = model->mutable_parameter(name);
    if (target.rows() != rows || target.cols() != cols) {
      throw SchemaError("array '" + name + "' has shape [" +
                        std::to_string(rows) + ", " + std::to_string(cols) +
                        "], expected " + ad::ShapeToString(target.shape()));
    }
    for (double& v : target.mutable_data()) {
      v = std::bit_cast<double>(in.Uint(8));
    }
  }
  if (!in.done()) throw ChecksumError("trailing bytes in checkpoint");
  return model;
}

void SaveCheckpoint(const Model& model, const std::filesystem::path& path) {
  const std::string bytes = SerializeCheckpoint(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("failed writing checkpoint " + path.string());
}

std::unique_ptr<Model> LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return DeserializeCheckpoint(buffer.str());
}

}  // namespace interp::models
