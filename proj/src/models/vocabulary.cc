// src/models/vocabulary.cc

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

#include "interp/models/vocabulary.h"

#include <cctype>

#include "interp/errors.h"

namespace interp::models {

Vocabulary::Vocabulary() {
  Add(kPadToken);
  Add(kUnkToken);
}

Vocabulary Vocabulary::FromTokens(const std::vector<std::string>& tokens) {
  if (tokens.size() < 2 || tokens[kPad] != kPadToken ||
      tokens[kUnk] != kUnkToken) {
    throw ContractError("vocabulary must start with the PAD and UNK tokens");
  }
  Vocabulary vocab;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    if (vocab.Contains(tokens[i])) {
      throw ContractError("duplicate vocabulary token '" + tokens[i] + "'");
    }
    vocab.Add(tokens[i]);
  }
  return vocab;
}

std::size_t Vocabulary::Add(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), tokens_.size() - 1);
  return tokens_.size() - 1;
}

std::size_t Vocabulary::Id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::Contains(std::string_view token) const {
  return ids_.count(std::string(token)) != 0;
}

const std::string& Vocabulary::Token(std::size_t id) const {
  if (id >= tokens_.size()) {
    throw IndexError("token id " + std::to_string(id) + " out of range");
  }
  return tokens_[id];
}

std::vector<std::size_t> Vocabulary::Ids(
    const std::vector<std::string>& tokens) const {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(Id(t));
  return ids;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      tokens.emplace_back(1, raw);
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : raw);
    }
  }
  flush();
  if (tokens.empty()) throw EmptyInputError("input contains no tokens");
  return tokens;
}

bool IsPunctuation(std::string_view token) {
  if (token.empty()) return false;
  for (char raw : token) {
    const auto c = static_cast<unsigned char>(raw);
    if (c >= 0x80 || !std::ispunct(c)) return false;
  }
  return true;
}

}  // namespace interp::models
