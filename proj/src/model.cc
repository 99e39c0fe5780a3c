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
#include "paraemb/model.h"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "paraemb/error.h"
#include "paraemb/io.h"

namespace paraemb {

std::string_view InitSchemeName(InitScheme scheme) {
  return scheme == InitScheme::kTrained ? "trained" : "random-normal-unit";
}

EmbeddingTable::EmbeddingTable(size_t rows, size_t dim, InitScheme scheme)
    : rows_(rows), dim_(dim), scheme_(scheme), values_(rows * dim, 0.0) {
  if (dim == 0) throw UsageError("embedding dimension must be positive");
}

void EmbeddingTable::RoundToFloat() {
  for (double &v : values_) v = static_cast<float>(v);
}

EmbeddingTable InitTable(const Vocabulary &vocab, size_t dim,
                         InitScheme scheme, uint64_t seed) {
  EmbeddingTable table(vocab.size(), dim, scheme);
  std::mt19937_64 rng(seed);
  const double stddev = scheme == InitScheme::kTrained ? 0.1 : 1.0;
  std::normal_distribution<double> normal(0.0, stddev);
  for (double &v : table.values()) v = static_cast<float>(normal(rng));
  return table;
}

SentenceVec Encode(const EmbeddingTable &table, const EncoderSpec &spec,
                   const TokenSeq &tokens, std::mt19937_64 *rng,
                   DropoutMask *mask) {
  const size_t dim = table.dim();
  SentenceVec vec;
  vec.values.assign(dim, 0.0);
  vec.n_tokens_used = static_cast<int32_t>(tokens.ids.size());
  if (tokens.ids.empty()) return vec;

  const bool dropout = spec.train && spec.dropout > 0.0;
  if (!dropout) {
    for (int32_t id : tokens.ids) {
      auto row = table.row(id);
      for (size_t j = 0; j < dim; ++j) vec.values[j] += row[j];
    }
  } else {
    if (rng == nullptr) throw UsageError("train-mode dropout needs an RNG");
    const double scale = 1.0 / (1.0 - spec.dropout);
    std::bernoulli_distribution keep(1.0 - spec.dropout);
    if (mask != nullptr) mask->assign(tokens.ids.size() * dim, 0);
    for (size_t k = 0; k < tokens.ids.size(); ++k) {
      auto row = table.row(tokens.ids[k]);
      for (size_t j = 0; j < dim; ++j) {
        if (keep(*rng)) {
          vec.values[j] += row[j] * scale;
          if (mask != nullptr) (*mask)[k * dim + j] = 1;
        }
      }
    }
  }
  const double n = static_cast<double>(tokens.ids.size());
  for (double &v : vec.values) v /= n;
  return vec;
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (size_t j = 0; j < u.size(); ++j) {
    dot += u[j] * v[j];
    uu += u[j] * u[j];
    vv += v[j] * v[j];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return dot / (std::sqrt(uu) * std::sqrt(vv));
}

double Cosine(const SentenceVec &u, const SentenceVec &v) {
  return Cosine(std::span<const double>(u.values),
                std::span<const double>(v.values));
}

double Similarity(const EmbeddingTable &table, const EncoderSpec &spec,
                  const TokenSeq &s, const TokenSeq &t) {
  EncoderSpec eval = spec;
  eval.train = false;
  return Cosine(Encode(table, eval, s), Encode(table, eval, t));
}

std::vector<SentenceVec> EncodeBatch(const EmbeddingTable &table,
                                     const EncoderSpec &spec,
                                     std::span<const TokenSeq> sentences,
                                     int threads) {
  const size_t dim = table.dim();
  // One contiguous accumulator for the whole batch, scattered out at the end.
  std::vector<double> sums(sentences.size() * dim, 0.0);
  ParallelFor(sentences.size(), threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      double *acc = sums.data() + i * dim;
      const auto &ids = sentences[i].ids;
      for (int32_t id : ids) {
        const double *row = table.row(id).data();
        for (size_t j = 0; j < dim; ++j) acc[j] += row[j];
      }
      if (!ids.empty()) {
        const double inv = 1.0 / static_cast<double>(ids.size());
        for (size_t j = 0; j < dim; ++j) acc[j] *= inv;
      }
    }
  });
  (void)spec;
  std::vector<SentenceVec> out(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) {
    out[i].values.assign(sums.begin() + i * dim, sums.begin() + (i + 1) * dim);
    out[i].n_tokens_used = static_cast<int32_t>(sentences[i].ids.size());
  }
  return out;
}

std::string EncoderModel::SerializeTable() const {
  const Vocabulary &vocab = text.vocab();
  std::string out = "embmodel v1 kind=" + std::string(KindName(text.kind())) +
                    " dim=" + std::to_string(table.dim()) +
                    " vocab=" + std::to_string(table.rows()) + "\n";
  for (size_t r = 0; r < table.rows(); ++r) {
    out += vocab.token(static_cast<int32_t>(r));
    out += '\t';
    auto row = table.row(r);
    for (size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += ' ';
      out += FormatFloat(row[j]);
    }
    out += '\n';
  }
  return out;
}

EmbeddingTable EncoderModel::ParseTable(std::string_view contents,
                                        const TextPipeline &text) {
  std::istringstream in{std::string(contents)};
  std::string line;
  if (!std::getline(in, line)) throw DataError("model file: empty");
  std::istringstream header(line);
  std::string magic, version, kind_field, dim_field, vocab_field;
  header >> magic >> version >> kind_field >> dim_field >> vocab_field;
  if (magic != "embmodel" || version != "v1" ||
      kind_field.rfind("kind=", 0) != 0 || dim_field.rfind("dim=", 0) != 0 ||
      vocab_field.rfind("vocab=", 0) != 0) {
    throw DataError("model file: bad header '" + line + "'");
  }
  TokenizerKind kind = ParseKind(kind_field.substr(5));
  long long dim = ParseInt(dim_field.substr(4), "model header dim");
  long long rows = ParseInt(vocab_field.substr(6), "model header vocab");
  if (kind != text.kind()) {
    throw DataError("model file kind " + kind_field.substr(5) +
                    " does not match tokenizer kind " +
                    std::string(KindName(text.kind())));
  }
  if (dim <= 0) throw DataError("model file: dim must be positive");
  if (static_cast<size_t>(rows) != text.vocab().size()) {
    throw DataError("model file has " + std::to_string(rows) +
                    " rows but the vocabulary has " +
                    std::to_string(text.vocab().size()));
  }

  EmbeddingTable table(static_cast<size_t>(rows), static_cast<size_t>(dim));
  for (long long r = 0; r < rows; ++r) {
    const std::string context = "model file line " + std::to_string(r + 2);
    if (!std::getline(in, line)) throw DataError(context + ": missing row");
    size_t tab = line.find('\t');
    if (tab == std::string::npos || line.substr(0, tab) !=
                                        text.vocab().token(static_cast<int32_t>(r))) {
      throw DataError(context + ": token does not match vocabulary");
    }
    const char *p = line.c_str() + tab + 1;
    auto out = table.row(static_cast<size_t>(r));
    for (long long j = 0; j < dim; ++j) {
      char *end = nullptr;
      float value = std::strtof(p, &end);
      if (end == p || !std::isfinite(value)) {
        throw DataError(context + ": bad value at column " +
                        std::to_string(j + 1));
      }
      out[static_cast<size_t>(j)] = value;
      p = end;
    }
    while (*p == ' ') ++p;
    if (*p != '\0') throw DataError(context + ": too many values");
  }
  return table;
}

void ParallelFor(size_t n, int threads,
                 const std::function<void(size_t, size_t)> &fn) {
  if (threads <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  size_t workers = std::min<size_t>(static_cast<size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    size_t begin = n * w / workers;
    size_t end = n * (w + 1) / workers;
    pool.emplace_back(fn, begin, end);
  }
  for (auto &t : pool) t.join();
}

}  // namespace paraemb
