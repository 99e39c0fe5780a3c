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
#include "paraemb/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "paraemb/error.h"
#include "paraemb/io.h"

namespace paraemb {
namespace {

std::vector<TokenSeq> TokenizeBatch(const EncoderModel &model, Side side,
                                    std::span<const std::string> sentences,
                                    int threads) {
  std::vector<TokenSeq> tokens(sentences.size());
  ParallelFor(sentences.size(), threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      tokens[i] = model.text.Encode(side, sentences[i]);
    }
  });
  return tokens;
}

}  // namespace

double SentencesPerSecond(size_t count, double seconds) {
  if (!(seconds > 0.0)) throw NumericError("throughput needs positive time");
  return static_cast<double>(count) / seconds;
}

BenchReport MeasureThroughput(const EncoderModel &model,
                              std::span<const std::string> sentences,
                              const BenchOptions &options,
                              std::vector<SentenceVec> *embeddings) {
  if (sentences.empty()) throw DataError("bench: no sentences");
  if (options.batch_size < 1) throw UsageError("bench: batch size must be >= 1");
  const size_t batch = options.batch_size;
  const size_t num_batches = (sentences.size() + batch - 1) / batch;
  const EncoderSpec spec = model.spec();

  std::vector<std::vector<TokenSeq>> pretokenized;
  if (!options.include_tokenization) {
    for (size_t b = 0; b < num_batches; ++b) {
      auto slice = sentences.subspan(
          b * batch, std::min(batch, sentences.size() - b * batch));
      pretokenized.push_back(
          TokenizeBatch(model, options.side, slice, options.threads));
    }
  }

  double sink = 0.0;
  size_t total_tokens = 0;
  auto run_batch = [&](size_t b, bool keep) {
    auto slice = sentences.subspan(
        b * batch, std::min(batch, sentences.size() - b * batch));
    std::vector<TokenSeq> fresh;
    const std::vector<TokenSeq> *tokens;
    if (options.include_tokenization) {
      fresh = TokenizeBatch(model, options.side, slice, options.threads);
      tokens = &fresh;
    } else {
      tokens = &pretokenized[b];
    }
    std::vector<SentenceVec> vecs =
        EncodeBatch(model.table, spec, *tokens, options.threads);
    for (const SentenceVec &v : vecs) sink += v.values[0];
    if (keep) {
      for (const TokenSeq &t : *tokens) total_tokens += t.ids.size();
      if (embeddings != nullptr) {
        embeddings->insert(embeddings->end(),
                           std::make_move_iterator(vecs.begin()),
                           std::make_move_iterator(vecs.end()));
      }
    }
  };

  const size_t warmup = std::min(options.warmup_batches, num_batches);
  for (size_t b = 0; b < warmup; ++b) run_batch(b, false);

  const auto start = std::chrono::steady_clock::now();
  for (size_t b = 0; b < num_batches; ++b) run_batch(b, true);
  const auto stop = std::chrono::steady_clock::now();
  // Keeps the encodings observable.
  volatile double observed = sink;
  (void)observed;

  BenchReport report;
  report.wall_seconds = std::chrono::duration<double>(stop - start).count();
  report.count = sentences.size();
  report.sentences_per_sec = SentencesPerSecond(report.count,
                                                report.wall_seconds);
  report.batch_size = batch;
  report.dim = model.table.dim();
  report.kind = model.text.kind();
  report.mean_tokens =
      static_cast<double>(total_tokens) / static_cast<double>(report.count);
  report.warmup_discarded = warmup > 0;
  report.tokenization_timed = options.include_tokenization;
  report.threads = options.threads;
  return report;
}

std::string BenchReport::ToTsv() const {
  std::string out =
      "sentences_per_sec\tbatch_size\tdim\tkind\tcount\tmean_tokens\t"
      "wall_seconds\twarmup_discarded\ttokenization_timed\tthreads\t"
      "reference_gpu_sentences_per_sec\n";
  out += FormatFloat(sentences_per_sec) + '\t' + std::to_string(batch_size) +
         '\t' + std::to_string(dim) + '\t' + std::string(KindName(kind)) +
         '\t' + std::to_string(count) + '\t' + FormatFloat(mean_tokens) +
         '\t' + FormatFloat(wall_seconds) + '\t' +
         (warmup_discarded ? "1" : "0") + '\t' +
         (tokenization_timed ? "1" : "0") + '\t' + std::to_string(threads) +
         '\t' + FormatFloat(kReferenceGpuSentencesPerSec) + '\n';
  return out;
}

std::string BenchReport::ToText() const {
  std::string out;
  out += "encoded " + std::to_string(count) + " sentences (" +
         std::string(KindName(kind)) + ", d=" + std::to_string(dim) +
         ", batch " + std::to_string(batch_size) + ", " +
         std::to_string(threads) + " thread(s)) in " +
         FormatFloat(wall_seconds) + " s\n";
  out += "throughput: " + FormatFloat(sentences_per_sec) +
         " sentences/sec; mean tokens/sentence " + FormatFloat(mean_tokens) +
         (tokenization_timed ? "; tokenization timed" : "; tokenization untimed") +
         (warmup_discarded ? "; warmup discarded" : "") + "\n";
  out += "reference: " + FormatFloat(kReferenceGpuSentencesPerSec) +
         " sentences/sec published for the same encoder on a GPU "
         "(d=300, batches of 128)\n";
  return out;
}

std::vector<std::string> SampleSentences(const std::string &path, size_t count,
                                         uint64_t seed) {
  if (count == 0) return {};
  std::mt19937_64 rng(seed);
  // Reservoir of (line index, text).
  std::vector<std::pair<size_t, std::string>> reservoir;
  reservoir.reserve(count);
  size_t seen = 0;
  ForEachLine(path, [&](std::string_view line, size_t number) {
    if (line.empty()) return;
    RequireUtf8(line, path, number);
    if (reservoir.size() < count) {
      reservoir.emplace_back(seen, std::string(line));
    } else {
      std::uniform_int_distribution<size_t> pick(0, seen);
      size_t slot = pick(rng);
      if (slot < count) reservoir[slot] = {seen, std::string(line)};
    }
    ++seen;
  });
  if (reservoir.empty()) throw DataError(path + ": no sentences to sample");
  std::sort(reservoir.begin(), reservoir.end());
  std::vector<std::string> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    out.push_back(reservoir[i % reservoir.size()].second);
  }
  return out;
}

std::vector<std::string> SyntheticSentences(size_t count, uint64_t seed,
                                            size_t lexicon_size) {
  static constexpr const char *kOnsets[] = {"b", "c", "d", "f", "g", "h",
                                            "k", "l", "m", "n", "p", "r",
                                            "s", "t", "v", "w", "st", "tr"};
  static constexpr const char *kVowels[] = {"a", "e", "i", "o", "u", "ai",
                                            "ou", "ea"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> onset(0, std::size(kOnsets) - 1);
  std::uniform_int_distribution<size_t> vowel(0, std::size(kVowels) - 1);
  std::uniform_int_distribution<int> syllables(1, 4);
  std::vector<std::string> lexicon;
  lexicon.reserve(lexicon_size);
  for (size_t w = 0; w < lexicon_size; ++w) {
    std::string word;
    for (int s = syllables(rng); s > 0; --s) {
      word += kOnsets[onset(rng)];
      word += kVowels[vowel(rng)];
    }
    lexicon.push_back(std::move(word));
  }

  // Zipf-like ranks: floor(L^u) for uniform u.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> length(6, 24);
  std::vector<std::string> sentences;
  sentences.reserve(count);
  const double log_l = std::log(static_cast<double>(lexicon_size));
  for (size_t i = 0; i < count; ++i) {
    std::string sentence;
    for (int k = length(rng); k > 0; --k) {
      size_t rank = static_cast<size_t>(std::exp(unit(rng) * log_l)) - 1;
      if (!sentence.empty()) sentence += ' ';
      sentence += lexicon[std::min(rank, lexicon_size - 1)];
    }
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

}  // namespace paraemb
