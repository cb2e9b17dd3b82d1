// src/models/datasets.cc

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

#include "interp/models/datasets.h"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "interp/errors.h"
#include "interp/random.h"

namespace interp::models {
namespace {

const std::string& Pick(const std::vector<std::string>& words, Rng& rng) {
  return words[rng.UniformInt(words.size())];
}

void CheckSize(std::size_t n) {
  if (n < 10) throw ContractError("synthetic datasets need n >= 10");
}

void Split(std::vector<Example> examples, Dataset& out) {
  const std::size_t train_size = examples.size() * 4 / 5;
  out.train.assign(std::make_move_iterator(examples.begin()),
                   std::make_move_iterator(examples.begin() + train_size));
  out.heldout.assign(std::make_move_iterator(examples.begin() + train_size),
                     std::make_move_iterator(examples.end()));
}

}  // namespace

const SentimentLexicon& GetSentimentLexicon() {
  static const SentimentLexicon lexicon = [] {
    SentimentLexicon l;
    l.positive = {"good",      "great",    "amazing",   "excellent",
                  "wonderful", "superb",   "brilliant", "delightful",
                  "fantastic", "lovely",   "charming",  "enjoyable",
                  "moving",    "clever",   "beautiful", "masterful",
                  "fun",       "gripping", "stunning",  "perfect"};
    l.negative = {"bad",      "awful",    "terrible",   "boring",
                  "dull",     "horrible", "inadequate", "tedious",
                  "dreadful", "poor",     "clumsy",     "bland",
                  "messy",    "weak",     "painful",    "lifeless",
                  "annoying", "stale",    "ugly",       "worst"};
    l.filler = {
        "the",       "a",          "an",         "this",      "that",
        "movie",     "film",       "demo",       "story",     "plot",
        "is",        "was",        "it",         "and",       "of",
        "with",      "to",         "for",        "on",        "by",
        "actors",    "cast",       "director",   "script",    "scene",
        "scenes",    "music",      "score",      "camera",    "ending",
        "opening",   "character",  "characters", "dialogue",  "pace",
        "runtime",   "sequel",     "book",       "novel",     "show",
        "episode",   "season",     "series",     "studio",    "budget",
        "audience",  "critics",    "viewers",    "we",        "they",
        "i",         "you",        "he",         "she",       "my",
        "our",       "their",      "his",        "her",       "its",
        "very",      "quite",      "really",     "rather",    "somewhat",
        "mostly",    "overall",    "often",      "always",    "never",
        "sometimes", "again",      "still",      "just",      "also",
        "seemed",    "felt",       "looked",     "sounded",   "became",
        "watched",   "saw",        "heard",      "read",      "found",
        "thought",   "said",       "made",       "took",      "gave",
        "anyone",    "everyone",   "someone",    "nobody",    "people",
        "friends",   "family",     "kids",       "adults",    "fans",
        "night",     "day",        "week",       "year",      "time",
        "hour",      "minute",     "moment",     "yesterday", "today",
        "theater",   "screen",     "home",       "city",      "town",
        "world",     "house",      "room",       "street",    "car",
        "first",     "second",     "last",       "next",      "other",
        "new",       "old",        "long",       "short",     "whole",
        "part",      "half",       "end",        "start",     "middle",
        "there",     "here",       "then",       "now",       "later",
        "about",     "after",      "before",     "during",    "around",
        "into",      "over",       "under",      "through",   "between",
        "tony",      "hawk",       "style",      "genre",     "version",
        "trailer",   "poster",     "ticket",     "popcorn",   "seat"};
    l.punctuation = {".", "!", ","};
    return l;
  }();
  return lexicon;
}

const TaggingLexicon& GetTaggingLexicon() {
  static const TaggingLexicon lexicon = [] {
    TaggingLexicon l;
    l.tags = {"O", "LOC", "PER", "ORG"};
    l.single["LOC"] = {"paris",  "berlin",  "tokyo",  "london",
                       "madrid", "cairo",   "lima",   "oslo",
                       "rome",   "vienna",  "seattle", "boston",
                       "chicago", "denver", "dublin", "nairobi"};
    l.single["PER"] = {"alice", "bob",   "carol",  "dave",  "erin",  "frank",
                       "grace", "heidi", "ivan",   "judy",  "oscar", "peggy",
                       "trent", "victor", "walter", "wendy"};
    l.single["ORG"] = {"acme",     "globex", "initech",   "hooli",
                       "vandelay", "soylent", "wonka",    "cyberdyne",
                       "tyrell",   "umbrella", "aperture", "monarch",
                       "oscorp",   "gringotts", "duff",    "krusty"};
    l.first["LOC"] = {"new", "san", "hong", "buenos"};
    l.second["LOC"] = {"york", "diego", "kong", "aires"};
    l.first["PER"] = l.single["PER"];
    l.second["PER"] = {"smith", "jones", "garcia", "nguyen"};
    l.first["ORG"] = l.single["ORG"];
    l.second["ORG"] = {"corp", "labs", "inc", "group"};
    l.triggers["LOC"] = {"in", "near", "downtown", "visited"};
    l.triggers["PER"] = {"named", "mr", "ms", "met"};
    l.triggers["ORG"] = {"at", "joined", "company", "hired"};
    l.ambiguous = {"jordan", "washington", "georgia", "lincoln",
                   "austin", "florence",   "chelsea", "madison"};
    l.filler = {"the",   "we",     "they",   "she",    "he",      "went",
                "saw",   "works",  "lives",  "said",   "today",   "with",
                "and",   "about",  "report", "meeting", "friend", "city",
                "team",  "last",   "week",   "later",  "again",   "also",
                "then",  "there",  "after",  "before", "news",    "story",
                "trip",  "people", "many",   "some",   "every",   "our",
                "their", "yesterday", "soon", "quietly"};
    return l;
  }();
  return lexicon;
}

Dataset MakeSyntheticClassification(std::uint64_t seed, std::size_t n) {
  CheckSize(n);
  const SentimentLexicon& lex = GetSentimentLexicon();
  Rng rng(seed);
  Dataset out;
  out.task = TaskKind::kClassification;
  out.labels = {"positive", "negative"};

  std::vector<std::size_t> classes(n, 1);
  std::fill(classes.begin(), classes.begin() + n / 2, 0);
  Shuffle(classes, rng);

  std::vector<Example> examples;
  examples.reserve(n);
  for (std::size_t cls : classes) {
    const auto& keywords = cls == 0 ? lex.positive : lex.negative;
    const std::size_t length = 4 + rng.UniformInt(7);
    const std::size_t keyword_count = 1 + rng.UniformInt(2);
    std::vector<std::size_t> slots(length);
    for (std::size_t i = 0; i < length; ++i) slots[i] = i;
    Shuffle(slots, rng);
    Example ex;
    ex.tokens.resize(length);
    for (std::size_t i = 0; i < length; ++i) {
      ex.tokens[slots[i]] = i < keyword_count ? Pick(keywords, rng)
                                              : Pick(lex.filler, rng);
    }
    if (rng.UniformInt(2) == 0) ex.tokens.push_back(Pick(lex.punctuation, rng));
    ex.label = out.labels[cls];
    ++out.label_counts[ex.label];
    examples.push_back(std::move(ex));
  }
  Split(std::move(examples), out);

  out.lexicon = lex.positive;
  for (const auto* list : {&lex.negative, &lex.filler, &lex.punctuation}) {
    out.lexicon.insert(out.lexicon.end(), list->begin(), list->end());
  }
  return out;
}

Dataset MakeSyntheticTagging(std::uint64_t seed, std::size_t n) {
  CheckSize(n);
  const TaggingLexicon& lex = GetTaggingLexicon();
  const std::vector<std::string> entity_tags = {"LOC", "PER", "ORG"};
  Rng rng(seed);
  Dataset out;
  out.task = TaskKind::kTagging;
  out.labels = lex.tags;
  for (const auto& tag : lex.tags) out.label_counts[tag] = 0;

  std::vector<Example> examples;
  examples.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    Example ex;
    auto emit = [&](const std::string& token, const std::string& tag) {
      ex.tokens.push_back(token);
      ex.tags.push_back(tag);
    };
    const std::size_t lead = rng.UniformInt(3);
    for (std::size_t i = 0; i < lead; ++i) emit(Pick(lex.filler, rng), "O");
    const std::size_t entities = 1 + rng.UniformInt(2);
    for (std::size_t e = 0; e < entities; ++e) {
      const std::string& tag = Pick(entity_tags, rng);
      const std::size_t kind = rng.UniformInt(10);
      if (kind < 3) {
        // Ambiguous word: only its trigger decides the tag.
        emit(Pick(lex.triggers.at(tag), rng), "O");
        emit(Pick(lex.ambiguous, rng), tag);
        continue;
      }
      // Every entity is preceded by an O token so adjacent runs never merge.
      if (rng.UniformInt(2) == 0) {
        emit(Pick(lex.triggers.at(tag), rng), "O");
      } else {
        emit(Pick(lex.filler, rng), "O");
      }
      if (kind < 7) {
        emit(Pick(lex.single.at(tag), rng), tag);
      } else {
        const std::size_t pair = rng.UniformInt(lex.first.at(tag).size());
        if (tag == "LOC") {
          emit(lex.first.at(tag)[pair], tag);
          emit(lex.second.at(tag)[pair], tag);
        } else {
          emit(lex.first.at(tag)[pair], tag);
          emit(Pick(lex.second.at(tag), rng), tag);
        }
      }
    }
    const std::size_t trail = rng.UniformInt(3);
    for (std::size_t i = 0; i < trail; ++i) emit(Pick(lex.filler, rng), "O");
    for (const auto& tag : ex.tags) ++out.label_counts[tag];
    examples.push_back(std::move(ex));
  }
  Split(std::move(examples), out);

  std::set<std::string> seen;
  auto add = [&](const std::vector<std::string>& words) {
    for (const auto& w : words) {
      if (seen.insert(w).second) out.lexicon.push_back(w);
    }
  };
  for (const auto& tag : entity_tags) {
    add(lex.single.at(tag));
    add(lex.first.at(tag));
    add(lex.second.at(tag));
    add(lex.triggers.at(tag));
  }
  add(lex.ambiguous);
  add(lex.filler);
  return out;
}

Vocabulary BuildVocabulary(const Dataset& dataset) {
  Vocabulary vocab;
  for (const auto& token : dataset.lexicon) vocab.Add(token);
  return vocab;
}

std::string ExampleToJson(const Example& example, TaskKind task) {
  nlohmann::ordered_json j;
  j["tokens"] = example.tokens;
  if (task == TaskKind::kClassification) {
    j["label"] = example.label;
  } else {
    j["tags"] = example.tags;
  }
  return j.dump();
}

void WriteJsonl(std::ostream& out, const std::vector<Example>& examples,
                TaskKind task) {
  for (const auto& ex : examples) out << ExampleToJson(ex, task) << '\n';
}

}  // namespace interp::models
