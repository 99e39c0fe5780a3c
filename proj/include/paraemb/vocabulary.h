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
#ifndef PARAEMB_VOCABULARY_H_
#define PARAEMB_VOCABULARY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "paraemb/tokenize.h"

namespace paraemb {

struct VocabEntry {
  std::string token;
  int64_t frequency = 0;

  bool operator==(const VocabEntry &other) const = default;
};

// Token sequence resolved against a vocabulary.
struct TokenSeq {
  std::vector<int32_t> ids;
  // Input tokens that had no vocabulary entry.
  int32_t n_oov = 0;

  bool operator==(const TokenSeq &other) const = default;
};

// Dense token <-> id map over rank-ordered entries.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Entries are kept in the given order; duplicate tokens throw DataError.
  Vocabulary(TokenizerKind kind, std::vector<VocabEntry> entries,
             std::optional<size_t> cap = std::nullopt);

  TokenizerKind kind() const { return kind_; }
  std::optional<size_t> cap() const { return cap_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<VocabEntry> &entries() const { return entries_; }
  const std::string &token(int32_t id) const { return entries_[id].token; }

  std::optional<int32_t> Find(std::string_view token) const;

  TokenSeq Lookup(std::span<const std::string> tokens) const;

  // "token<TAB>frequency" per line, rank order.
  std::string Serialize() const;
  static Vocabulary Parse(TokenizerKind kind, std::string_view contents);

 private:
  struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  TokenizerKind kind_ = TokenizerKind::kWord;
  std::optional<size_t> cap_;
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, int32_t, StringHash, std::equal_to<>> ids_;
};

// Accumulates token frequencies over any number of streams.
class VocabCounter {
 public:
  void Add(std::span<const std::string> tokens);

  // Ranks by descending frequency, ties by ascending token string, then keeps
  // the first cap entries.
  Vocabulary Build(TokenizerKind kind,
                   std::optional<size_t> cap = std::nullopt) const;

 private:
  std::unordered_map<std::string, int64_t> counts_;
};

// Joint vocabulary over token streams; a token string shared by two streams
// gets a single id.
Vocabulary BuildVocab(
    std::span<const std::vector<std::vector<std::string>>> streams,
    TokenizerKind kind, std::optional<size_t> cap = std::nullopt);

// Fraction of the English vocabulary's tokens that also occur in the other
// vocabulary. Both must be of kind sp.
double SpOverlap(const Vocabulary &vocab_en, const Vocabulary &vocab_xx);

}  // namespace paraemb

#endif  // PARAEMB_VOCABULARY_H_
