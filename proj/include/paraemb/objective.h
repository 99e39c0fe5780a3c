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
#ifndef PARAEMB_OBJECTIVE_H_
#define PARAEMB_OBJECTIVE_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "paraemb/model.h"
#include "paraemb/vocabulary.h"

namespace paraemb {

enum class NegativeMode {
  kMonolingual,  // candidates: both sides of every other pair
  kBilingual     // candidates: target side of every other pair
};

std::string_view NegativeModeName(NegativeMode mode);
NegativeMode ParseNegativeMode(std::string_view name);

struct TrainConfig {
  double margin = 0.4;
  int megabatch_cap = 60;
  // Minibatches processed per mega-batch size increment.
  int anneal_rate = 150;
  int minibatch_size = 128;
  double dropout = 0.3;
  double learning_rate = 0.001;
  int epochs = 10;
  int dim = 300;
  uint64_t seed = 1;
  NegativeMode negative_mode = NegativeMode::kBilingual;

  // Throws UsageError naming the first invalid field.
  void Validate() const;
};

// Gradient rows keyed by embedding row; rows never touched are absent.
class SparseGrad {
 public:
  explicit SparseGrad(size_t dim = 0) : dim_(dim) {}

  size_t dim() const { return dim_; }
  size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  // Rows in first-touch order.
  const std::vector<int32_t> &rows() const { return rows_; }

  // Zero-initialized on first access. The span is invalidated by the next
  // call that adds a row.
  std::span<double> Row(int32_t row);
  // Empty span if the row is absent.
  std::span<const double> Find(int32_t row) const;

 private:
  size_t dim_;
  std::vector<int32_t> rows_;
  std::vector<double> data_;
  std::unordered_map<int32_t, size_t> slot_;
};

struct AdamState {
  AdamState() = default;
  explicit AdamState(const EmbeddingTable &table)
      : rows(table.rows()),
        dim(table.dim()),
        first_moment(table.values().size(), 0.0),
        second_moment(table.values().size(), 0.0) {}

  size_t rows = 0;
  size_t dim = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One (s, t, t') example; the pointers must outlive the call.
struct TrainingTriple {
  const TokenSeq *source;
  const TokenSeq *target;
  const TokenSeq *negative;
};

struct LossResult {
  double loss = 0.0;
  SparseGrad grads;
  // Pairs with a positive hinge.
  int64_t active = 0;
  // Pairs skipped because one side encoded to the zero vector.
  int64_t skipped = 0;
};

// max(0, margin - sim_pos + sim_neg)
double Hinge(double sim_pos, double sim_neg, double margin);

// Summed hinge loss over the batch and its exact gradient with respect to
// every touched embedding row. In train mode (spec.train, dropout > 0) one
// mask per encoding is drawn from rng, and the gradient is exact for the
// sampled masks. A pair at the kink (hinge argument exactly 0) contributes
// no gradient.
LossResult LossAndGrads(const EmbeddingTable &table, const EncoderSpec &spec,
                        std::span<const TrainingTriple> batch, double margin,
                        std::mt19937_64 *rng = nullptr);

// Bias-corrected Adam on the rows present in grads only; the step count
// advances once per call. A non-finite gradient throws NumericError before
// anything is modified.
void AdamStep(EmbeddingTable *table, const SparseGrad &grads, AdamState *state,
              double learning_rate);

}  // namespace paraemb

#endif  // PARAEMB_OBJECTIVE_H_
