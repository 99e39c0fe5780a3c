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
#ifndef PARAEMB_EVAL_H_
#define PARAEMB_EVAL_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "paraemb/model.h"
#include "paraemb/pipeline.h"

namespace paraemb {

// Sample Pearson correlation. Throws DataError on length mismatch or fewer
// than two points, NumericError if either input is constant.
double Pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of average ranks (ties share the mean rank).
double Spearman(std::span<const double> x, std::span<const double> y);

// Average ranks, 1-based.
std::vector<double> AverageRanks(std::span<const double> values);

struct StsItem {
  std::string sent1;
  std::string sent2;
  double gold = 0.0;
};

struct StsDataset {
  std::string name;
  std::vector<StsItem> items;

  std::vector<double> gold() const;
  // Gold scores in [0, 5] and at least two items; throws DataError.
  void Validate() const;

  // "sent1<TAB>sent2<TAB>score" per line.
  static StsDataset Load(const std::string &path);
};

struct StsResult {
  double pearson = 0.0;
  // One cosine per item, in dataset order.
  std::vector<double> similarities;
  // Items where either sentence had no in-vocabulary token.
  size_t zero_vector_items = 0;
};

// Propagates Pearson errors, e.g. when every sentence is out of vocabulary.
StsResult EvalSts(const EncoderModel &model, const StsDataset &dataset,
                  Side side1 = Side::kSource, Side side2 = Side::kSource,
                  int threads = 1);

using PairSet = std::set<std::pair<std::string, std::string>>;

struct MiningCorpus {
  std::vector<std::string> source_ids;
  std::vector<std::string> source_sentences;
  std::vector<std::string> target_ids;
  std::vector<std::string> target_sentences;
  PairSet gold;

  // Gold ids must exist and form a partial matching; throws DataError.
  void Validate() const;
};

// Reads "id<TAB>sentence" lines.
void LoadMiningSide(const std::string &path, std::vector<std::string> *ids,
                    std::vector<std::string> *sentences);
// Reads "src_id<TAB>tgt_id" lines.
PairSet LoadGold(const std::string &path);

struct ScoredPair {
  std::string source_id;
  std::string target_id;
  double score = 0.0;
};

// Nearest target (by cosine, lowest index on ties) for every source.
std::vector<ScoredPair> NearestTargets(const EncoderModel &model,
                                       const MiningCorpus &corpus,
                                       int threads = 1);

PairSet ApplyThreshold(std::span<const ScoredPair> scored, double threshold);

// Forward nearest neighbour, kept when its cosine reaches the threshold.
PairSet Mine(const EncoderModel &model, const MiningCorpus &corpus,
             double threshold, int threads = 1);

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Empty predictions give (0, 0, 0). Empty gold throws DataError.
F1Score ComputeF1(const PairSet &predicted, const PairSet &gold);

struct ThresholdChoice {
  double threshold = 0.0;
  F1Score score;
};

// Sweeps the distinct observed scores; ties in F1 go to the larger threshold.
ThresholdChoice TuneThreshold(std::span<const ScoredPair> scored,
                              const PairSet &gold);

struct AnalysisRow {
  std::string lang;
  double sts = 0.0;
  double overlap = 0.0;
  double distance = 0.0;
  std::vector<std::pair<std::string, double>> features;
};

// "lang<TAB>sts<TAB>overlap<TAB>distance[<TAB>feature=value...]"
std::vector<AnalysisRow> LoadAnalysisRows(const std::string &path);

struct CorrelationEntry {
  std::string subset;
  size_t n = 0;
  // Spearman rho x 100; nullopt when undefined (< 3 rows or constant input).
  std::optional<double> overlap;
  std::optional<double> distance;
  std::map<std::string, std::optional<double>> features;
};

struct AnalysisReport {
  double split = 0.3;
  std::vector<CorrelationEntry> entries;

  std::string ToTsv() const;
  std::string ToText() const;
};

// Correlations of STS score against overlap and distance over all rows, rows
// with overlap <= split, and rows with overlap > split.
AnalysisReport Analyze(std::span<const AnalysisRow> rows, double split = 0.3);

}  // namespace paraemb

#endif  // PARAEMB_EVAL_H_
