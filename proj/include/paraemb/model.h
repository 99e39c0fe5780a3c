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
#ifndef PARAEMB_MODEL_H_
#define PARAEMB_MODEL_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paraemb/pipeline.h"
#include "paraemb/tokenize.h"
#include "paraemb/vocabulary.h"

namespace paraemb {

enum class InitScheme {
  kTrained,          // N(0, 0.1^2), starting point for training
  kRandomNormalUnit  // N(0, 1), untrained random-encoder baseline
};

std::string_view InitSchemeName(InitScheme scheme);

// V x d row-major parameter matrix; row i embeds vocabulary id i.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(size_t rows, size_t dim,
                 InitScheme scheme = InitScheme::kTrained);

  size_t rows() const { return rows_; }
  size_t dim() const { return dim_; }
  InitScheme init_scheme() const { return scheme_; }

  std::span<double> row(size_t r) { return {values_.data() + r * dim_, dim_}; }
  std::span<const double> row(size_t r) const {
    return {values_.data() + r * dim_, dim_};
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  // Rounds every entry to the nearest float. Checkpoints hold rounded
  // tables so that the 9-digit text format reloads them exactly.
  void RoundToFloat();

  bool operator==(const EmbeddingTable &other) const = default;

 private:
  size_t rows_ = 0;
  size_t dim_ = 0;
  InitScheme scheme_ = InitScheme::kTrained;
  std::vector<double> values_;
};

// Deterministic in seed. Draws are rounded to float precision.
EmbeddingTable InitTable(const Vocabulary &vocab, size_t dim,
                         InitScheme scheme, uint64_t seed);

struct EncoderSpec {
  TokenizerKind kind = TokenizerKind::kSp;
  size_t dim = 300;
  // Probability of zeroing an embedding coordinate in train mode.
  double dropout = 0.0;
  bool train = false;
};

struct SentenceVec {
  std::vector<double> values;
  // In-vocabulary tokens averaged; zero means values is all zeros.
  int32_t n_tokens_used = 0;
};

// Per-coordinate keep mask of one encoding, token-major: entry
// [k * dim + j] is 1 if coordinate j of token k survived dropout.
using DropoutMask = std::vector<uint8_t>;

// Mean of the token embedding rows. In train mode with dropout p, each
// coordinate of each token embedding is kept with probability 1 - p and
// scaled by 1 / (1 - p); rng is then required, and if mask is non-null the
// sampled mask is stored there.
SentenceVec Encode(const EmbeddingTable &table, const EncoderSpec &spec,
                   const TokenSeq &tokens, std::mt19937_64 *rng = nullptr,
                   DropoutMask *mask = nullptr);

// u.v / (|u| |v|), or 0 if either vector is zero.
double Cosine(std::span<const double> u, std::span<const double> v);
double Cosine(const SentenceVec &u, const SentenceVec &v);

// Eval-mode cosine of the two encodings.
double Similarity(const EmbeddingTable &table, const EncoderSpec &spec,
                  const TokenSeq &s, const TokenSeq &t);

// Eval-mode encodings of many sentences, optionally split across threads.
std::vector<SentenceVec> EncodeBatch(const EmbeddingTable &table,
                                     const EncoderSpec &spec,
                                     std::span<const TokenSeq> sentences,
                                     int threads = 1);

// Text pipeline plus parameters: everything needed to embed raw text.
struct EncoderModel {
  TextPipeline text;
  EmbeddingTable table;

  EncoderSpec spec() const {
    return EncoderSpec{text.kind(), table.dim(), 0.0, false};
  }
  SentenceVec EncodeText(Side side, std::string_view sentence) const {
    return Encode(table, spec(), text.Encode(side, sentence));
  }

  // Model file: header "embmodel v1 kind=<k> dim=<d> vocab=<V>", then one
  // "token<TAB>f1 ... fd" line per row, 9 significant digits.
  std::string SerializeTable() const;
  static EmbeddingTable ParseTable(std::string_view contents,
                                   const TextPipeline &text);
};

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one per
// thread. threads <= 1 runs inline.
void ParallelFor(size_t n, int threads,
                 const std::function<void(size_t, size_t)> &fn);

}  // namespace paraemb

#endif  // PARAEMB_MODEL_H_
