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
#ifndef PARAEMB_BENCH_H_
#define PARAEMB_BENCH_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "paraemb/model.h"
#include "paraemb/pipeline.h"

namespace paraemb {

// Published GPU throughput of the 300-dimensional subword averaging encoder,
// batches of 128. Reported next to local figures for context only.
inline constexpr double kReferenceGpuSentencesPerSec = 855571.0;

struct BenchOptions {
  size_t batch_size = 128;
  // Batches encoded before timing starts.
  size_t warmup_batches = 2;
  // Time tokenization together with encoding.
  bool include_tokenization = true;
  int threads = 1;
  Side side = Side::kSource;
};

struct BenchReport {
  double sentences_per_sec = 0.0;
  size_t batch_size = 0;
  size_t dim = 0;
  TokenizerKind kind = TokenizerKind::kSp;
  size_t count = 0;
  double mean_tokens = 0.0;
  double wall_seconds = 0.0;
  bool warmup_discarded = false;
  bool tokenization_timed = true;
  int threads = 1;

  std::string ToTsv() const;
  std::string ToText() const;
};

// count / seconds
double SentencesPerSecond(size_t count, double seconds);

// Encodes every sentence in batches, timing the whole pass after warmup.
// If embeddings is non-null the eval-mode encodings are appended to it.
BenchReport MeasureThroughput(const EncoderModel &model,
                              std::span<const std::string> sentences,
                              const BenchOptions &options,
                              std::vector<SentenceVec> *embeddings = nullptr);

// Seeded uniform sample of count lines from a sentence-per-line file
// (reservoir sampling, original order kept). A file with fewer lines is
// cycled.
std::vector<std::string> SampleSentences(const std::string &path, size_t count,
                                         uint64_t seed);

// Seeded pseudo-text over a generated lexicon with skewed word frequencies.
std::vector<std::string> SyntheticSentences(size_t count, uint64_t seed,
                                            size_t lexicon_size = 5000);

}  // namespace paraemb

#endif  // PARAEMB_BENCH_H_
