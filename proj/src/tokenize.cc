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
#include "paraemb/tokenize.h"

#include "paraemb/error.h"
#include "paraemb/text.h"

namespace paraemb {

std::string_view KindName(TokenizerKind kind) {
  switch (kind) {
    case TokenizerKind::kSp:
      return "sp";
    case TokenizerKind::kTrigram:
      return "trigram";
    case TokenizerKind::kWord:
      return "word";
  }
  return "?";
}

TokenizerKind ParseKind(std::string_view name) {
  if (name == "sp") return TokenizerKind::kSp;
  if (name == "trigram") return TokenizerKind::kTrigram;
  if (name == "word") return TokenizerKind::kWord;
  throw UsageError("unknown tokenizer kind '" + std::string(name) +
                   "' (expected sp, trigram or word)");
}

std::vector<std::string> TokenizeTrigrams(std::string_view sentence) {
  std::vector<std::string> trigrams;
  std::vector<std::string_view> chars;
  for (std::string_view word : SplitWords(sentence)) {
    chars.clear();
    chars.push_back(kTrigramBegin);
    for (std::string_view ch : SplitCodePoints(word)) chars.push_back(ch);
    chars.push_back(kTrigramEnd);
    for (size_t i = 0; i + 2 < chars.size(); ++i) {
      std::string trigram;
      trigram.reserve(chars[i].size() + chars[i + 1].size() +
                      chars[i + 2].size());
      trigram.append(chars[i]).append(chars[i + 1]).append(chars[i + 2]);
      trigrams.push_back(std::move(trigram));
    }
  }
  return trigrams;
}

std::vector<std::string> TokenizeWords(std::string_view sentence,
                                       bool lowercase) {
  std::string normalized = NormalizeText(sentence, lowercase);
  std::vector<std::string> words;
  for (std::string_view word : SplitWords(normalized)) words.emplace_back(word);
  return words;
}

Tokenizer::Tokenizer(TokenizerKind kind, bool lowercase,
                     std::shared_ptr<const SubwordModel> subword,
                     std::string prefix)
    : kind_(kind),
      lowercase_(lowercase),
      subword_(std::move(subword)),
      prefix_(std::move(prefix)) {
  if (kind_ == TokenizerKind::kSp && subword_ == nullptr) {
    throw UsageError("sp tokenizer requires a subword model");
  }
  if (kind_ != TokenizerKind::kSp) subword_.reset();
}

std::vector<std::string> Tokenizer::Tokens(std::string_view sentence) const {
  return TokensOfNormalized(NormalizeText(sentence, lowercase_));
}

std::vector<std::string> Tokenizer::TokensOfNormalized(
    std::string_view text) const {
  std::vector<std::string> tokens;
  switch (kind_) {
    case TokenizerKind::kSp:
      tokens = SegmentSp(*subword_, text);
      break;
    case TokenizerKind::kTrigram:
      tokens = TokenizeTrigrams(text);
      break;
    case TokenizerKind::kWord:
      for (std::string_view word : SplitWords(text)) tokens.emplace_back(word);
      break;
  }
  if (!prefix_.empty()) {
    for (std::string &token : tokens) token.insert(0, prefix_);
  }
  return tokens;
}

}  // namespace paraemb
