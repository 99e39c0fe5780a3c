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
#include "paraemb/eval.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "paraemb/error.h"
#include "paraemb/io.h"

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

std::vector<SentenceVec> EncodeSentences(const EncoderModel &model, Side side,
                                         std::span<const std::string> text,
                                         int threads) {
  std::vector<TokenSeq> tokens(text.size());
  ParallelFor(text.size(), threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      tokens[i] = model.text.Encode(side, text[i]);
    }
  });
  return EncodeBatch(model.table, model.spec(), tokens, threads);
}

std::optional<double> Rho100(std::span<const double> x,
                             std::span<const double> y) {
  if (x.size() < 3) return std::nullopt;
  try {
    return 100.0 * Spearman(x, y);
  } catch (const NumericError &) {
    return std::nullopt;
  }
}

std::string FormatOptional(const std::optional<double> &value) {
  return value ? FormatFloat(*value) : "NA";
}

}  // namespace

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("pearson: length mismatch " + std::to_string(x.size()) +
                    " vs " + std::to_string(y.size()));
  }
  if (x.size() < 2) throw DataError("pearson: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw NumericError("pearson: correlation undefined for a constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double rank = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("spearman: length mismatch " + std::to_string(x.size()) +
                    " vs " + std::to_string(y.size()));
  }
  std::vector<double> rx = AverageRanks(x);
  std::vector<double> ry = AverageRanks(y);
  return Pearson(rx, ry);
}

std::vector<double> StsDataset::gold() const {
  std::vector<double> g;
  g.reserve(items.size());
  for (const StsItem &item : items) g.push_back(item.gold);
  return g;
}

void StsDataset::Validate() const {
  if (items.size() < 2) {
    throw DataError("STS dataset " + name + " needs at least two items");
  }
  for (size_t i = 0; i < items.size(); ++i) {
    if (!(items[i].gold >= 0.0 && items[i].gold <= 5.0)) {
      throw DataError("STS dataset " + name + " item " +
                      std::to_string(i + 1) + ": gold score " +
                      FormatFloat(items[i].gold) + " outside [0, 5]");
    }
  }
}

StsDataset StsDataset::Load(const std::string &path) {
  StsDataset dataset;
  dataset.name = path;
  ForEachLine(path, [&](std::string_view line, size_t number) {
    if (line.empty()) return;
    RequireUtf8(line, path, number);
    auto fields = SplitTabs(line);
    if (fields.size() != 3) {
      throw DataError(path + ":" + std::to_string(number) +
                      ": expected sent1<TAB>sent2<TAB>score");
    }
    dataset.items.push_back(StsItem{
        std::string(fields[0]), std::string(fields[1]),
        ParseDouble(fields[2], path + ":" + std::to_string(number))});
  });
  dataset.Validate();
  return dataset;
}

StsResult EvalSts(const EncoderModel &model, const StsDataset &dataset,
                  Side side1, Side side2, int threads) {
  std::vector<std::string> first, second;
  first.reserve(dataset.items.size());
  second.reserve(dataset.items.size());
  for (const StsItem &item : dataset.items) {
    first.push_back(item.sent1);
    second.push_back(item.sent2);
  }
  std::vector<SentenceVec> a = EncodeSentences(model, side1, first, threads);
  std::vector<SentenceVec> b = EncodeSentences(model, side2, second, threads);
  StsResult result;
  result.similarities.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].n_tokens_used == 0 || b[i].n_tokens_used == 0) {
      ++result.zero_vector_items;
    }
    result.similarities.push_back(Cosine(a[i], b[i]));
  }
  result.pearson = Pearson(result.similarities, dataset.gold());
  return result;
}

void MiningCorpus::Validate() const {
  if (source_ids.size() != source_sentences.size() ||
      target_ids.size() != target_sentences.size()) {
    throw DataError("mining corpus: id and sentence counts differ");
  }
  std::set<std::string> sources(source_ids.begin(), source_ids.end());
  std::set<std::string> targets(target_ids.begin(), target_ids.end());
  if (sources.size() != source_ids.size()) {
    throw DataError("mining corpus: duplicate source id");
  }
  if (targets.size() != target_ids.size()) {
    throw DataError("mining corpus: duplicate target id");
  }
  std::set<std::string> seen_source, seen_target;
  for (const auto &[s, t] : gold) {
    if (!sources.count(s)) throw DataError("gold source id '" + s + "' unknown");
    if (!targets.count(t)) throw DataError("gold target id '" + t + "' unknown");
    if (!seen_source.insert(s).second || !seen_target.insert(t).second) {
      throw DataError("gold pairs are not a partial matching (" + s + ", " +
                      t + ")");
    }
  }
}

void LoadMiningSide(const std::string &path, std::vector<std::string> *ids,
                    std::vector<std::string> *sentences) {
  ForEachLine(path, [&](std::string_view line, size_t number) {
    if (line.empty()) return;
    RequireUtf8(line, path, number);
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw DataError(path + ":" + std::to_string(number) +
                      ": expected id<TAB>sentence");
    }
    ids->emplace_back(line.substr(0, tab));
    sentences->emplace_back(line.substr(tab + 1));
  });
}

PairSet LoadGold(const std::string &path) {
  PairSet gold;
  ForEachLine(path, [&](std::string_view line, size_t number) {
    if (line.empty()) return;
    auto fields = SplitTabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError(path + ":" + std::to_string(number) +
                      ": expected src_id<TAB>tgt_id");
    }
    gold.emplace(std::string(fields[0]), std::string(fields[1]));
  });
  return gold;
}

std::vector<ScoredPair> NearestTargets(const EncoderModel &model,
                                       const MiningCorpus &corpus,
                                       int threads) {
  const size_t dim = model.table.dim();
  const size_t ns = corpus.source_sentences.size();
  const size_t nt = corpus.target_sentences.size();
  if (nt == 0) return {};
  const std::vector<double> src = UnitRows(
      EncodeSentences(model, Side::kSource, corpus.source_sentences, threads),
      dim);
  const std::vector<double> tgt = UnitRows(
      EncodeSentences(model, Side::kTarget, corpus.target_sentences, threads),
      dim);

  std::vector<size_t> best(ns, 0);
  std::vector<double> best_score(ns, 0.0);
  ParallelFor(ns, threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const double *q = src.data() + i * dim;
      double top = -std::numeric_limits<double>::infinity();
      size_t arg = 0;
      for (size_t k = 0; k < nt; ++k) {
        const double *row = tgt.data() + k * dim;
        double score = 0.0;
        for (size_t j = 0; j < dim; ++j) score += q[j] * row[j];
        if (score > top) {
          top = score;
          arg = k;
        }
      }
      best[i] = arg;
      best_score[i] = top;
    }
  });

  std::vector<ScoredPair> scored;
  scored.reserve(ns);
  for (size_t i = 0; i < ns; ++i) {
    scored.push_back(ScoredPair{corpus.source_ids[i],
                                corpus.target_ids[best[i]], best_score[i]});
  }
  return scored;
}

PairSet ApplyThreshold(std::span<const ScoredPair> scored, double threshold) {
  PairSet predicted;
  for (const ScoredPair &pair : scored) {
    if (pair.score >= threshold) {
      predicted.emplace(pair.source_id, pair.target_id);
    }
  }
  return predicted;
}

PairSet Mine(const EncoderModel &model, const MiningCorpus &corpus,
             double threshold, int threads) {
  return ApplyThreshold(NearestTargets(model, corpus, threads), threshold);
}

F1Score ComputeF1(const PairSet &predicted, const PairSet &gold) {
  if (gold.empty()) throw DataError("f1: empty gold set");
  F1Score score;
  if (predicted.empty()) return score;
  size_t hits = 0;
  for (const auto &pair : predicted) hits += gold.count(pair);
  score.precision = static_cast<double>(hits) / predicted.size();
  score.recall = static_cast<double>(hits) / gold.size();
  if (hits > 0) {
    score.f1 = 2.0 * score.precision * score.recall /
               (score.precision + score.recall);
  }
  return score;
}

ThresholdChoice TuneThreshold(std::span<const ScoredPair> scored,
                              const PairSet &gold) {
  if (scored.empty()) throw DataError("tune_threshold: no scored pairs");
  if (gold.empty()) throw DataError("tune_threshold: empty gold set");
  std::vector<const ScoredPair *> order;
  order.reserve(scored.size());
  for (const ScoredPair &pair : scored) order.push_back(&pair);
  std::stable_sort(order.begin(), order.end(),
                   [](const ScoredPair *a, const ScoredPair *b) {
                     return a->score > b->score;
                   });

  // Lower the threshold one distinct score at a time, counting predictions
  // and hits incrementally.
  ThresholdChoice best;
  bool have_best = false;
  size_t predicted = 0, hits = 0;
  for (size_t i = 0; i < order.size();) {
    const double threshold = order[i]->score;
    while (i < order.size() && order[i]->score == threshold) {
      ++predicted;
      hits += gold.count({order[i]->source_id, order[i]->target_id});
      ++i;
    }
    F1Score score;
    score.precision = static_cast<double>(hits) / predicted;
    score.recall = static_cast<double>(hits) / gold.size();
    if (hits > 0) {
      score.f1 = 2.0 * score.precision * score.recall /
                 (score.precision + score.recall);
    }
    if (!have_best || score.f1 > best.score.f1) {
      best = ThresholdChoice{threshold, score};
      have_best = true;
    }
  }
  return best;
}

std::vector<AnalysisRow> LoadAnalysisRows(const std::string &path) {
  std::vector<AnalysisRow> rows;
  ForEachLine(path, [&](std::string_view line, size_t number) {
    if (line.empty()) return;
    const std::string context = path + ":" + std::to_string(number);
    auto fields = SplitTabs(line);
    if (fields.size() < 4) {
      throw DataError(context +
                      ": expected lang<TAB>sts<TAB>overlap<TAB>distance");
    }
    AnalysisRow row;
    row.lang = std::string(fields[0]);
    row.sts = ParseDouble(fields[1], context);
    row.overlap = ParseDouble(fields[2], context);
    row.distance = ParseDouble(fields[3], context);
    if (!(row.overlap >= 0.0 && row.overlap <= 1.0)) {
      throw DataError(context + ": overlap outside [0, 1]");
    }
    for (size_t f = 4; f < fields.size(); ++f) {
      size_t eq = fields[f].find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw DataError(context + ": expected feature=value");
      }
      row.features.emplace_back(std::string(fields[f].substr(0, eq)),
                                ParseDouble(fields[f].substr(eq + 1), context));
    }
    rows.push_back(std::move(row));
  });
  return rows;
}

AnalysisReport Analyze(std::span<const AnalysisRow> rows, double split) {
  if (rows.size() < 3) throw DataError("analyze: need at least three rows");
  AnalysisReport report;
  report.split = split;

  auto entry_for = [&](const std::string &name,
                       const std::vector<const AnalysisRow *> &subset) {
    CorrelationEntry entry;
    entry.subset = name;
    entry.n = subset.size();
    std::vector<double> sts, overlap, distance;
    for (const AnalysisRow *row : subset) {
      sts.push_back(row->sts);
      overlap.push_back(row->overlap);
      distance.push_back(row->distance);
    }
    entry.overlap = Rho100(sts, overlap);
    entry.distance = Rho100(sts, distance);

    std::set<std::string> names;
    for (const AnalysisRow *row : subset) {
      for (const auto &[feature, value] : row->features) names.insert(feature);
    }
    for (const std::string &feature : names) {
      std::vector<double> values;
      std::vector<double> matching_sts;
      for (const AnalysisRow *row : subset) {
        for (const auto &[f, value] : row->features) {
          if (f == feature) {
            values.push_back(value);
            matching_sts.push_back(row->sts);
            break;
          }
        }
      }
      entry.features[feature] = values.size() == subset.size()
                                    ? Rho100(matching_sts, values)
                                    : std::nullopt;
    }
    return entry;
  };

  std::vector<const AnalysisRow *> all, low, high;
  for (const AnalysisRow &row : rows) {
    all.push_back(&row);
    (row.overlap <= split ? low : high).push_back(&row);
  }
  report.entries.push_back(entry_for("all", all));
  report.entries.push_back(entry_for("overlap<=" + FormatFloat(split), low));
  report.entries.push_back(entry_for("overlap>" + FormatFloat(split), high));
  return report;
}

std::string AnalysisReport::ToTsv() const {
  std::set<std::string> features;
  for (const auto &entry : entries) {
    for (const auto &[name, value] : entry.features) features.insert(name);
  }
  std::string out = "subset\tn\tsts_vs_overlap\tsts_vs_distance";
  for (const auto &name : features) out += "\tsts_vs_" + name;
  out += '\n';
  for (const auto &entry : entries) {
    out += entry.subset + '\t' + std::to_string(entry.n) + '\t' +
           FormatOptional(entry.overlap) + '\t' +
           FormatOptional(entry.distance);
    for (const auto &name : features) {
      auto it = entry.features.find(name);
      out += '\t';
      out += it == entry.features.end() ? "NA" : FormatOptional(it->second);
    }
    out += '\n';
  }
  return out;
}

std::string AnalysisReport::ToText() const {
  std::string out = "Spearman rho x 100 of STS score (split at overlap " +
                    FormatFloat(split) + ")\n";
  for (const auto &entry : entries) {
    out += "  " + entry.subset + " (n=" + std::to_string(entry.n) +
           "): overlap " + FormatOptional(entry.overlap) + ", distance " +
           FormatOptional(entry.distance);
    for (const auto &[name, value] : entry.features) {
      out += ", " + name + " " + FormatOptional(value);
    }
    out += '\n';
  }
  return out;
}

}  // namespace paraemb
