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
#ifndef PARAEMB_PIPELINE_H_
#define PARAEMB_PIPELINE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "paraemb/tokenize.h"
#include "paraemb/vocabulary.h"

namespace paraemb {

enum class Side { kSource, kTarget };

std::string_view SideName(Side side);
// Accepts "src"/"source" and "tgt"/"target".
Side ParseSide(std::string_view name);

struct PipelineOptions {
  TokenizerKind kind = TokenizerKind::kSp;
  // Subword inventory size (sp only).
  size_t sp_size = 20000;
  std::optional<size_t> cap;
  // One subword model learned over both sides, or one per side.
  bool joint = true;
  bool lowercase = true;
  // Prepended to every target-side token; a non-empty marker removes all
  // parameter sharing between the sides.
  std::string target_prefix;
};

// Source and target tokenizers plus the joint vocabulary that maps their
// tokens to embedding rows. Identical token strings from the two sides share
// one id.
class TextPipeline {
 public:
  TextPipeline() = default;
  TextPipeline(Tokenizer source, Tokenizer target, Vocabulary vocab);

  const Tokenizer &tokenizer(Side side) const {
    return side == Side::kSource ? source_ : target_;
  }
  const Vocabulary &vocab() const { return vocab_; }
  TokenizerKind kind() const { return vocab_.kind(); }

  TokenSeq Encode(Side side, std::string_view sentence) const;

  // Writes tokenizer.json, vocab.tsv, and source.bpe (plus target.bpe when
  // the sides use different subword models) into dir.
  void Save(const std::string &dir) const;
  static TextPipeline Load(const std::string &dir);

 private:
  // Vocabulary id of every subword symbol (prefix applied), -1 if absent;
  // lets sp encoding skip building piece strings.
  void BuildSymbolMaps();
  const std::vector<int32_t> &symbol_map(Side side) const {
    return side == Side::kSource ? source_symbols_ : target_symbols_;
  }

  Tokenizer source_;
  Tokenizer target_;
  Vocabulary vocab_;
  std::vector<int32_t> source_symbols_;
  std::vector<int32_t> target_symbols_;
};

TextPipeline LearnPipeline(std::span<const std::string> source,
                           std::span<const std::string> target,
                           const PipelineOptions &options);

}  // namespace paraemb

#endif  // PARAEMB_PIPELINE_H_
