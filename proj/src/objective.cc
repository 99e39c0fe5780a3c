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
#include "paraemb/objective.h"

#include <cmath>

#include "paraemb/error.h"

namespace paraemb {
namespace {

double Dot(const std::vector<double> &u, const std::vector<double> &v) {
  double sum = 0.0;
  for (size_t j = 0; j < u.size(); ++j) sum += u[j] * v[j];
  return sum;
}

// Adds d(loss)/d(rows) for one encoding given d(loss)/d(encoding).
void Scatter(const std::vector<double> &grad, const TokenSeq &tokens,
             const DropoutMask &mask, double keep_scale, SparseGrad *out) {
  const size_t dim = grad.size();
  const double inv_n = 1.0 / static_cast<double>(tokens.ids.size());
  for (size_t k = 0; k < tokens.ids.size(); ++k) {
    auto row = out->Row(tokens.ids[k]);
    if (mask.empty()) {
      for (size_t j = 0; j < dim; ++j) row[j] += grad[j] * inv_n;
    } else {
      const uint8_t *keep = mask.data() + k * dim;
      for (size_t j = 0; j < dim; ++j) {
        if (keep[j]) row[j] += grad[j] * keep_scale * inv_n;
      }
    }
  }
}

}  // namespace

std::string_view NegativeModeName(NegativeMode mode) {
  return mode == NegativeMode::kBilingual ? "bilingual" : "monolingual";
}

NegativeMode ParseNegativeMode(std::string_view name) {
  if (name == "bilingual") return NegativeMode::kBilingual;
  if (name == "monolingual") return NegativeMode::kMonolingual;
  throw UsageError("unknown negative mode '" + std::string(name) +
                   "' (expected monolingual or bilingual)");
}

void TrainConfig::Validate() const {
  if (!(margin > 0.0)) throw UsageError("margin must be > 0");
  if (megabatch_cap < 1) throw UsageError("megabatch cap must be >= 1");
  if (anneal_rate < 1) throw UsageError("anneal rate must be >= 1");
  if (minibatch_size < 1) throw UsageError("minibatch size must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw UsageError("dropout must be in [0, 1)");
  }
  if (!(learning_rate > 0.0)) throw UsageError("learning rate must be > 0");
  if (epochs < 0) throw UsageError("epochs must be >= 0");
  if (dim < 1) throw UsageError("dim must be >= 1");
}

std::span<double> SparseGrad::Row(int32_t row) {
  auto [it, inserted] = slot_.emplace(row, rows_.size());
  if (inserted) {
    rows_.push_back(row);
    data_.resize(data_.size() + dim_, 0.0);
  }
  return {data_.data() + it->second * dim_, dim_};
}

std::span<const double> SparseGrad::Find(int32_t row) const {
  auto it = slot_.find(row);
  if (it == slot_.end()) return {};
  return {data_.data() + it->second * dim_, dim_};
}

double Hinge(double sim_pos, double sim_neg, double margin) {
  return std::max(0.0, margin - sim_pos + sim_neg);
}

LossResult LossAndGrads(const EmbeddingTable &table, const EncoderSpec &spec,
                        std::span<const TrainingTriple> batch, double margin,
                        std::mt19937_64 *rng) {
  const size_t dim = table.dim();
  LossResult result;
  result.grads = SparseGrad(dim);
  const bool dropout = spec.train && spec.dropout > 0.0;
  const double keep_scale = dropout ? 1.0 / (1.0 - spec.dropout) : 1.0;

  DropoutMask mask_s, mask_t, mask_n;
  std::vector<double> grad_s(dim), grad_t(dim), grad_n(dim);
  for (const TrainingTriple &triple : batch) {
    SentenceVec s = Encode(table, spec, *triple.source, rng, &mask_s);
    SentenceVec t = Encode(table, spec, *triple.target, rng, &mask_t);
    SentenceVec n = Encode(table, spec, *triple.negative, rng, &mask_n);

    const double ss = Dot(s.values, s.values);
    const double tt = Dot(t.values, t.values);
    const double nn = Dot(n.values, n.values);
    if (ss == 0.0 || tt == 0.0 || nn == 0.0) {
      ++result.skipped;
      continue;
    }
    const double norm_s = std::sqrt(ss), norm_t = std::sqrt(tt),
                 norm_n = std::sqrt(nn);
    const double cos_pos = Dot(s.values, t.values) / (norm_s * norm_t);
    const double cos_neg = Dot(s.values, n.values) / (norm_s * norm_n);
    const double hinge = margin - cos_pos + cos_neg;
    if (!(hinge > 0.0)) continue;
    result.loss += hinge;
    ++result.active;

    // d cos(a, b) / da = b / (|a||b|) - cos(a, b) a / |a|^2
    for (size_t j = 0; j < dim; ++j) {
      const double dpos_ds =
          t.values[j] / (norm_s * norm_t) - cos_pos * s.values[j] / ss;
      const double dneg_ds =
          n.values[j] / (norm_s * norm_n) - cos_neg * s.values[j] / ss;
      grad_s[j] = dneg_ds - dpos_ds;
      grad_t[j] =
          -(s.values[j] / (norm_s * norm_t) - cos_pos * t.values[j] / tt);
      grad_n[j] = s.values[j] / (norm_s * norm_n) - cos_neg * n.values[j] / nn;
    }
    const DropoutMask none;
    Scatter(grad_s, *triple.source, dropout ? mask_s : none, keep_scale,
            &result.grads);
    Scatter(grad_t, *triple.target, dropout ? mask_t : none, keep_scale,
            &result.grads);
    Scatter(grad_n, *triple.negative, dropout ? mask_n : none, keep_scale,
            &result.grads);
  }
  return result;
}

void AdamStep(EmbeddingTable *table, const SparseGrad &grads, AdamState *state,
              double learning_rate) {
  if (state->rows != table->rows() || state->dim != table->dim() ||
      (!grads.empty() && grads.dim() != table->dim())) {
    throw UsageError("Adam state shape does not match the embedding table");
  }
  for (int32_t row : grads.rows()) {
    if (row < 0 || static_cast<size_t>(row) >= table->rows()) {
      throw UsageError("gradient row " + std::to_string(row) +
                       " outside the table");
    }
    for (double g : grads.Find(row)) {
      if (!std::isfinite(g)) {
        throw NumericError("non-finite gradient in embedding row " +
                           std::to_string(row));
      }
    }
  }

  ++state->step;
  const double t = static_cast<double>(state->step);
  const double correction1 = 1.0 - std::pow(state->beta1, t);
  const double correction2 = 1.0 - std::pow(state->beta2, t);
  const size_t dim = table->dim();
  for (int32_t row : grads.rows()) {
    auto g = grads.Find(row);
    auto params = table->row(static_cast<size_t>(row));
    double *m = state->first_moment.data() + static_cast<size_t>(row) * dim;
    double *v = state->second_moment.data() + static_cast<size_t>(row) * dim;
    for (size_t j = 0; j < dim; ++j) {
      m[j] = state->beta1 * m[j] + (1.0 - state->beta1) * g[j];
      v[j] = state->beta2 * v[j] + (1.0 - state->beta2) * g[j] * g[j];
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      params[j] -= learning_rate * m_hat / (std::sqrt(v_hat) + state->epsilon);
    }
  }
}

}  // namespace paraemb
