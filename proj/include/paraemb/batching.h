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
#ifndef PARAEMB_BATCHING_H_
#define PARAEMB_BATCHING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "paraemb/model.h"
#include "paraemb/objective.h"
#include "paraemb/pipeline.h"
#include "paraemb/vocabulary.h"

namespace paraemb {

// min(1 + processed / rate, cap)
int AnnealSize(int64_t minibatches_processed, int anneal_rate, int cap);

// A tokenized training pair. Text ids identify normalized sentence strings
// (one id space for both sides), so string-identical sentences compare equal.
struct TrainingPair {
  TokenSeq source;
  TokenSeq target;
  int32_t source_text = -1;
  int32_t target_text = -1;
};

// Consecutive minibatches pooled for negative selection.
//
// Candidate pool indexing: in bilingual mode candidate j is the target of
// the pair at position j; in monolingual mode candidate 2j is the source and
// 2j + 1 the target of the pair at position j.
struct MegaBatch {
  // Corpus indices, minibatch after minibatch.
  std::vector<size_t> pairs;
  // Start position of each minibatch followed by pairs.size().
  std::vector<size_t> minibatch_offsets;
  // Candidate index per pair, filled by SelectNegatives.
  std::vector<int32_t> negatives;

  size_t num_minibatches() const {
    return minibatch_offsets.empty() ? 0 : minibatch_offsets.size() - 1;
  }
};

struct Candidate {
  size_t position;
  Side side;
};

Candidate CandidateAt(NegativeMode mode, int32_t index);
size_t PoolSize(NegativeMode mode, size_t pairs);

// For each pair, picks the admissible candidate of highest eval-mode cosine
// with the pair's source; ties go to the lowest candidate index. Admissible:
// belongs to another pair and is not string-identical to the pair's target
// (nor, in monolingual mode, to its source). Throws DataError if some pair
// has no admissible candidate.
void SelectNegatives(MegaBatch *batch, std::span<const TrainingPair> corpus,
                     const EmbeddingTable &table, const EncoderSpec &spec,
                     NegativeMode mode, int threads = 1);

// The (s, t, t') triples of minibatch k after negatives are selected.
std::vector<TrainingTriple> MinibatchTriples(
    const MegaBatch &batch, size_t k, std::span<const TrainingPair> corpus,
    NegativeMode mode);

// One epoch over a shuffled corpus, cut into minibatches (the last one may
// be short) and grouped into mega-batches whose size follows AnnealSize on
// the global minibatch counter.
class EpochIterator {
 public:
  EpochIterator(size_t corpus_size, int minibatch_size, uint64_t seed,
                int epoch, int anneal_rate, int megabatch_cap,
                int64_t minibatches_processed);

  // Fills out with the next mega-batch; false at the end of the epoch.
  bool Next(MegaBatch *out);

  int64_t minibatches_processed() const { return processed_; }
  const std::vector<size_t> &order() const { return order_; }

 private:
  std::vector<size_t> order_;
  size_t position_ = 0;
  int minibatch_size_;
  int anneal_rate_;
  int megabatch_cap_;
  int64_t processed_;
};

}  // namespace paraemb

#endif  // PARAEMB_BATCHING_H_
