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
#ifndef PARAEMB_TOKENIZE_H_
#define PARAEMB_TOKENIZE_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "paraemb/subword.h"

namespace paraemb {

enum class TokenizerKind { kSp, kTrigram, kWord };

std::string_view KindName(TokenizerKind kind);
// Accepts "sp", "trigram", "word". Throws UsageError otherwise.
TokenizerKind ParseKind(std::string_view name);

// Character trigrams of every whitespace-separated word padded with
// kTrigramBegin/kTrigramEnd. A word of L code points yields L trigrams.
std::vector<std::string> TokenizeTrigrams(std::string_view sentence);

// Normalizes (NFC, optional lowercasing) and splits on whitespace.
std::vector<std::string> TokenizeWords(std::string_view sentence,
                                       bool lowercase = true);

// One language side's text-to-token pipeline: normalization, then the
// kind-specific split, then an optional prefix on every token.
class Tokenizer {
 public:
  Tokenizer() : Tokenizer(TokenizerKind::kWord, true, nullptr, "") {}
  Tokenizer(TokenizerKind kind, bool lowercase,
            std::shared_ptr<const SubwordModel> subword, std::string prefix);

  TokenizerKind kind() const { return kind_; }
  bool lowercase() const { return lowercase_; }
  const std::string &prefix() const { return prefix_; }
  // Null unless kind is kSp.
  const std::shared_ptr<const SubwordModel> &subword() const {
    return subword_;
  }

  std::vector<std::string> Tokens(std::string_view sentence) const;

  // Splits already-normalized text.
  std::vector<std::string> TokensOfNormalized(std::string_view text) const;

 private:
  TokenizerKind kind_;
  bool lowercase_;
  std::shared_ptr<const SubwordModel> subword_;
  std::string prefix_;
};

}  // namespace paraemb

#endif  // PARAEMB_TOKENIZE_H_
