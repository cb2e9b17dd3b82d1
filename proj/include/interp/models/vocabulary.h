// interp/models/vocabulary.h

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

#ifndef INTERP_MODELS_VOCABULARY_H_
#define INTERP_MODELS_VOCABULARY_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace interp::models {

/// Token <-> id map. Ids 0 and 1 are always PAD and UNK.
class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr std::string_view kPadToken = "@@PADDING@@";
  static constexpr std::string_view kUnkToken = "@@UNKNOWN@@";

  Vocabulary();
  /// Builds from an id-ordered token list whose first two entries must be the
  /// reserved tokens. Throws ContractError on duplicates.
  static Vocabulary FromTokens(const std::vector<std::string>& tokens);

  /// Returns the existing id when the token is already present.
  std::size_t Add(std::string_view token);
  /// Unknown tokens map to kUnk.
  std::size_t Id(std::string_view token) const;
  bool Contains(std::string_view token) const;
  const std::string& Token(std::size_t id) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<std::size_t> Ids(const std::vector<std::string>& tokens) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> ids_;
};

/// Lowercases and splits on whitespace; every ASCII punctuation character
/// becomes its own token. Throws EmptyInputError when nothing remains.
std::vector<std::string> Tokenize(std::string_view text);

/// True for tokens made only of ASCII punctuation.
bool IsPunctuation(std::string_view token);

}  // namespace interp::models

#endif  // INTERP_MODELS_VOCABULARY_H_
