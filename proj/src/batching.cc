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
#include "paraemb/batching.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "paraemb/error.h"

namespace paraemb {
namespace {

std::vector<double> UnitRows(const std::vector<SentenceVec> &vecs,
                             size_t dim) {
  std::vector<double> out(vecs.size() * dim, 0.0);
  for (size_t i = 0; i < vecs.size(); ++i) {
    double norm2 = 0.0;
    for (double v : vecs[i].values) norm2 += v * v;
    if (norm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (size_t j = 0; j < dim; ++j) out[i * dim + j] = vecs[i].values[j] * inv;
  }
  return out;
}

}  // namespace

int AnnealSize(int64_t minibatches_processed, int anneal_rate, int cap) {
  const int64_t size = 1 + minibatches_processed / anneal_rate;
  return static_cast<int>(std::min<int64_t>(size, cap));
}

Candidate CandidateAt(NegativeMode mode, int32_t index) {
  if (mode == NegativeMode::kBilingual) {
    return {static_cast<size_t>(index), Side::kTarget};
  }
  return {static_cast<size_t>(index / 2),
          index % 2 == 0 ? Side::kSource : Side::kTarget};
}

size_t PoolSize(NegativeMode mode, size_t pairs) {
  return mode == NegativeMode::kBilingual ? pairs : 2 * pairs;
}

void SelectNegatives(MegaBatch *batch, std::span<const TrainingPair> corpus,
                     const EmbeddingTable &table, const EncoderSpec &spec,
                     NegativeMode mode, int threads) {
  const size_t n = batch->pairs.size();
  if (n == 0) throw DataError("select_negatives: empty mega-batch");
  const size_t dim = table.dim();

  std::vector<TokenSeq> sources, targets;
  sources.reserve(n);
  targets.reserve(n);
  for (size_t index : batch->pairs) {
    sources.push_back(corpus[index].source);
    targets.push_back(corpus[index].target);
  }
  EncoderSpec eval = spec;
  eval.train = false;
  const std::vector<double> unit_s =
      UnitRows(EncodeBatch(table, eval, sources, threads), dim);
  const std::vector<double> unit_t =
      UnitRows(EncodeBatch(table, eval, targets, threads), dim);

  const size_t pool = PoolSize(mode, n);
  batch->negatives.assign(n, -1);
  ParallelFor(n, threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const TrainingPair &own = corpus[batch->pairs[i]];
      const double *query = unit_s.data() + i * dim;
      int32_t best = -1;
      double best_score = -std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < pool; ++c) {
        Candidate cand = CandidateAt(mode, static_cast<int32_t>(c));
        if (cand.position == i) continue;
        const TrainingPair &other = corpus[batch->pairs[cand.position]];
        const int32_t text = cand.side == Side::kSource ? other.source_text
                                                        : other.target_text;
        if (text == own.target_text) continue;
        if (mode == NegativeMode::kMonolingual && text == own.source_text) {
          continue;
        }
        const double *row =
            (cand.side == Side::kSource ? unit_s.data() : unit_t.data()) +
            cand.position * dim;
        double score = 0.0;
        for (size_t j = 0; j < dim; ++j) score += query[j] * row[j];
        if (score > best_score) {
          best_score = score;
          best = static_cast<int32_t>(c);
        }
      }
      batch->negatives[i] = best;
    }
  });
  for (size_t i = 0; i < n; ++i) {
    if (batch->negatives[i] < 0) {
      throw DataError("degenerate mega-batch: pair " + std::to_string(i) +
                      " of " + std::to_string(n) +
                      " has no admissible negative candidate");
    }
  }
}

std::vector<TrainingTriple> MinibatchTriples(
    const MegaBatch &batch, size_t k, std::span<const TrainingPair> corpus,
    NegativeMode mode) {
  std::vector<TrainingTriple> triples;
  const size_t begin = batch.minibatch_offsets[k];
  const size_t end = batch.minibatch_offsets[k + 1];
  triples.reserve(end - begin);
  for (size_t p = begin; p < end; ++p) {
    const TrainingPair &pair = corpus[batch.pairs[p]];
    Candidate cand = CandidateAt(mode, batch.negatives[p]);
    const TrainingPair &other = corpus[batch.pairs[cand.position]];
    const TokenSeq *negative =
        cand.side == Side::kSource ? &other.source : &other.target;
    triples.push_back(TrainingTriple{&pair.source, &pair.target, negative});
  }
  return triples;
}

EpochIterator::EpochIterator(size_t corpus_size, int minibatch_size,
                             uint64_t seed, int epoch, int anneal_rate,
                             int megabatch_cap, int64_t minibatches_processed)
    : order_(corpus_size),
      minibatch_size_(minibatch_size),
      anneal_rate_(anneal_rate),
      megabatch_cap_(megabatch_cap),
      processed_(minibatches_processed) {
  if (minibatch_size < 1) throw UsageError("minibatch size must be >= 1");
  std::iota(order_.begin(), order_.end(), size_t{0});
  std::seed_seq seq{static_cast<uint32_t>(seed),
                    static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(epoch)};
  std::mt19937_64 rng(seq);
  std::shuffle(order_.begin(), order_.end(), rng);
}

bool EpochIterator::Next(MegaBatch *out) {
  if (position_ >= order_.size()) return false;
  out->pairs.clear();
  out->negatives.clear();
  out->minibatch_offsets.assign(1, 0);
  const int size = AnnealSize(processed_, anneal_rate_, megabatch_cap_);
  for (int m = 0; m < size && position_ < order_.size(); ++m) {
    const size_t take = std::min<size_t>(static_cast<size_t>(minibatch_size_),
                                         order_.size() - position_);
    out->pairs.insert(out->pairs.end(), order_.begin() + position_,
                      order_.begin() + position_ + take);
    position_ += take;
    out->minibatch_offsets.push_back(out->pairs.size());
    ++processed_;
  }
  return true;
}

}  // namespace paraemb
