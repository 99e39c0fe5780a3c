// Copyright 2026 The paraemb Authors.
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
#include "paraemb/vocabulary.h"

#include <algorithm>
#include <sstream>

#include "paraemb/error.h"
#include "paraemb/io.h"

namespace paraemb {

Vocabulary::Vocabulary(TokenizerKind kind, std::vector<VocabEntry> entries,
                       std::optional<size_t> cap)
    : kind_(kind), cap_(cap), entries_(std::move(entries)) {
  if (cap_ && *cap_ == 0) throw UsageError("vocabulary cap must be positive");
  if (cap_ && entries_.size() > *cap_) entries_.resize(*cap_);
  ids_.reserve(entries_.size());
  for (size_t i = 0; i < entries_.size(); ++i) {
    auto [it, inserted] =
        ids_.emplace(entries_[i].token, static_cast<int32_t>(i));
    if (!inserted) {
      throw DataError("duplicate vocabulary token '" + entries_[i].token +
                      "'");
    }
  }
}

std::optional<int32_t> Vocabulary::Find(std::string_view token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TokenSeq Vocabulary::Lookup(std::span<const std::string> tokens) const {
  TokenSeq seq;
  seq.ids.reserve(tokens.size());
  for (const std::string &token : tokens) {
    auto it = ids_.find(token);
    if (it == ids_.end()) {
      ++seq.n_oov;
    } else {
      seq.ids.push_back(it->second);
    }
  }
  return seq;
}

std::string Vocabulary::Serialize() const {
  std::string out;
  for (const VocabEntry &entry : entries_) {
    out += entry.token;
    out += '\t';
    out += std::to_string(entry.frequency);
    out += '\n';
  }
  return out;
}

Vocabulary Vocabulary::Parse(TokenizerKind kind, std::string_view contents) {
  std::vector<VocabEntry> entries;
  std::istringstream in{std::string(contents)};
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw DataError("vocabulary line " + std::to_string(number) +
                      ": expected token<TAB>frequency");
    }
    entries.push_back(VocabEntry{
        std::string(fields[0]),
        ParseInt(fields[1], "vocabulary line " + std::to_string(number))});
  }
  return Vocabulary(kind, std::move(entries));
}

void VocabCounter::Add(std::span<const std::string> tokens) {
  for (const std::string &token : tokens) ++counts_[token];
}

Vocabulary VocabCounter::Build(TokenizerKind kind,
                               std::optional<size_t> cap) const {
  std::vector<VocabEntry> entries;
  entries.reserve(counts_.size());
  for (const auto &[token, count] : counts_) {
    entries.push_back(VocabEntry{token, count});
  }
  std::sort(entries.begin(), entries.end(),
            [](const VocabEntry &a, const VocabEntry &b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.token < b.token;
            });
  return Vocabulary(kind, std::move(entries), cap);
}

Vocabulary BuildVocab(
    std::span<const std::vector<std::vector<std::string>>> streams,
    TokenizerKind kind, std::optional<size_t> cap) {
  if (streams.empty()) throw UsageError("build_vocab needs at least one stream");
  VocabCounter counter;
  for (const auto &stream : streams) {
    for (const auto &tokens : stream) counter.Add(tokens);
  }
  return counter.Build(kind, cap);
}

double SpOverlap(const Vocabulary &vocab_en, const Vocabulary &vocab_xx) {
  if (vocab_en.kind() != TokenizerKind::kSp ||
      vocab_xx.kind() != TokenizerKind::kSp) {
    throw UsageError("sp_overlap requires two sp vocabularies");
  }
  if (vocab_en.empty()) throw DataError("sp_overlap: empty English vocabulary");
  size_t shared = 0;
  for (const VocabEntry &entry : vocab_en.entries()) {
    if (vocab_xx.Find(entry.token)) ++shared;
  }
  return static_cast<double>(shared) / static_cast<double>(vocab_en.size());
}

}  // namespace paraemb
