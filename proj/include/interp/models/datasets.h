// interp/models/datasets.h

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

#ifndef INTERP_MODELS_DATASETS_H_
#define INTERP_MODELS_DATASETS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "interp/models/model.h"

namespace interp::models {

struct Example {
  std::vector<std::string> tokens;
  std::string label;              // classification
  std::vector<std::string> tags;  // tagging, one per token
};

struct Dataset {
  TaskKind task = TaskKind::kClassification;
  std::vector<std::string> labels;  // class names, or tag names with "O" first
  std::vector<Example> train;
  std::vector<Example> heldout;
  /// Generator bookkeeping: examples per class, or tokens per tag.
  std::map<std::string, std::size_t> label_counts;
  /// Every token the generator can emit, in a fixed order.
  std::vector<std::string> lexicon;
};

/// Word lists behind the sentiment generator.
struct SentimentLexicon {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
  std::vector<std::string> filler;
  std::vector<std::string> punctuation;
};
const SentimentLexicon& GetSentimentLexicon();

/// Word lists behind the tagging generator. Ambiguous words are tagged by
/// the trigger word that always precedes them.
struct TaggingLexicon {
  std::vector<std::string> tags;  // "O" first
  std::map<std::string, std::vector<std::string>> single;  // tag -> words
  std::map<std::string, std::vector<std::string>> first;   // two-word entities
  std::map<std::string, std::vector<std::string>> second;
  std::map<std::string, std::vector<std::string>> triggers;
  std::vector<std::string> ambiguous;
  std::vector<std::string> filler;
};
const TaggingLexicon& GetTaggingLexicon();

/// n sentences of 4-11 tokens, each holding one or two keywords of a single
/// sentiment class among neutral fillers. Classes are balanced exactly
/// (n/2 positive). Shuffled, then split 80/20 into train/heldout. Pure in
/// (seed, n); n must be >= 10.
Dataset MakeSyntheticClassification(std::uint64_t seed, std::size_t n);

/// n sentences with one or two entities (LOC, PER, ORG) separated by O
/// tokens. Same split and purity rules.
Dataset MakeSyntheticTagging(std::uint64_t seed, std::size_t n);

/// PAD, UNK, then the generator lexicon.
Vocabulary BuildVocabulary(const Dataset& dataset);

/// One JSON object per line: {"tokens": [...], "label": ...} or
/// {"tokens": [...], "tags": [...]}.
std::string ExampleToJson(const Example& example, TaskKind task);
void WriteJsonl(std::ostream& out, const std::vector<Example>& examples,
                TaskKind task);

}  // namespace interp::models

#endif  // INTERP_MODELS_DATASETS_H_
