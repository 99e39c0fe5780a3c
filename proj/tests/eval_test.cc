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
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.h"
#include "paraemb/error.h"
#include "paraemb/eval.h"

namespace paraemb {
namespace {

std::vector<std::string> Lines(std::initializer_list<const char *> lines) {
  return {lines.begin(), lines.end()};
}

// Word-level model over the given words with a caller-filled table.
EncoderModel WordModel(const std::vector<std::string> &words, size_t dim) {
  std::string joined;
  for (const auto &w : words) joined += w + " ";
  PipelineOptions options;
  options.kind = TokenizerKind::kWord;
  std::vector<std::string> corpus{joined};
  TextPipeline text = LearnPipeline(corpus, corpus, options);
  return EncoderModel{text, EmbeddingTable(text.vocab().size(), dim)};
}

void SetRow(EncoderModel *model, const std::string &word, std::vector<double> v) {
  auto id = model->text.vocab().Find(word);
  ASSERT_TRUE(id.has_value()) << word;
  std::copy(v.begin(), v.end(), model->table.row(static_cast<size_t>(*id)).begin());
}

std::string TempFile(const std::string &name, const std::string &contents) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path.string();
}

TEST(PearsonTest, Examples) {
  std::vector<double> a{1, 2, 3}, b{3, 2, 1}, c{1, 3, 2};
  EXPECT_NEAR(Pearson(a, a), 1.0, 1e-15);
  EXPECT_NEAR(Pearson(a, b), -1.0, 1e-15);
  EXPECT_NEAR(Pearson(a, c), 0.5, 1e-15);
  EXPECT_NEAR(Pearson(a, c), oracle::PearsonOf(a, c), 1e-15);
}

TEST(PearsonTest, Errors) {
  std::vector<double> a{1, 2, 3}, flat{2, 2, 2};
  EXPECT_THROW(Pearson(a, flat), NumericError);
  EXPECT_THROW(Pearson(flat, a), NumericError);
  EXPECT_THROW(Pearson(std::vector<double>{1}, std::vector<double>{1}), DataError);
  EXPECT_THROW(Pearson(a, std::vector<double>{1, 2}), DataError);
}

TEST(PearsonTest, MatchesOracleAndAffineInvariance) {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 2 + gen() % 40;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = u(gen);
      y[i] = 0.5 * x[i] + u(gen);
    }
    double r = Pearson(x, y);
    EXPECT_NEAR(r, oracle::PearsonOf(x, y), 1e-12);
    EXPECT_LE(std::abs(r), 1.0);
    std::vector<double> ax(n);
    for (size_t i = 0; i < n; ++i) ax[i] = 3.0 * x[i] + 7.0;
    EXPECT_NEAR(Pearson(ax, y), r, 1e-12);
  }
}

TEST(SpearmanTest, Examples) {
  std::vector<double> a{1, 2, 3}, c{1, 3, 2};
  EXPECT_NEAR(Spearman(a, std::vector<double>{10, 20, 30}), 1.0, 1e-15);
  // 1 - 6 * 2 / (3 * 8)
  EXPECT_NEAR(Spearman(a, c), 0.5, 1e-15);
  std::vector<double> tied{1, 1, 2};
  EXPECT_EQ(AverageRanks(tied), (std::vector<double>{1.5, 1.5, 3}));
  EXPECT_NEAR(Spearman(tied, a), oracle::SpearmanOf(tied, a), 1e-15);
  EXPECT_THROW(Spearman(std::vector<double>{4, 4, 4}, a), NumericError);
}

TEST(SpearmanTest, MonotoneInvarianceWithTies) {
  std::mt19937 gen(2);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 3 + gen() % 30;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(gen() % 6);
      y[i] = static_cast<double>(gen() % 9);
    }
    if (std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end() ||
        std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end()) {
      continue;
    }
    double rho = Spearman(x, y);
    EXPECT_NEAR(rho, oracle::SpearmanOf(x, y), 1e-12);
    std::vector<double> ex(n);
    for (size_t i = 0; i < n; ++i) ex[i] = std::exp(x[i]) - 4.0;
    EXPECT_NEAR(Spearman(ex, y), rho, 1e-12);
  }
}

TEST(StsDatasetTest, LoadAndValidate) {
  auto path = TempFile("paraemb_sts.tsv", "a b\tc d\t4.5\ne f\tg h\t0\n");
  StsDataset ds = StsDataset::Load(path);
  ASSERT_EQ(ds.items.size(), 2u);
  EXPECT_EQ(ds.items[0].sent2, "c d");
  EXPECT_EQ(ds.gold(), (std::vector<double>{4.5, 0.0}));
  EXPECT_THROW(StsDataset::Load(TempFile("paraemb_sts_bad.tsv", "a\tb\t6\nc\td\t1\n")),
               DataError);
  EXPECT_THROW(StsDataset::Load(TempFile("paraemb_sts_cols.tsv", "a\tb\nc\td\t1\n")),
               DataError);
  EXPECT_THROW(StsDataset::Load(TempFile("paraemb_sts_one.tsv", "a\tb\t1\n")),
               DataError);
}

TEST(EvalStsTest, GoldEqualToOwnSimilaritiesGivesOne) {
  std::mt19937 gen(3);
  EncoderModel model = WordModel({"a", "b", "c", "d", "e"}, 4);
  std::normal_distribution<double> normal;
  for (double &v : model.table.values()) v = normal(gen);
  StsDataset ds{"self", {{"a b", "c", 0}, {"d", "e a", 1}, {"b c", "c", 2}, {"e", "a", 3}}};
  StsResult first = EvalSts(model, ds);
  ASSERT_EQ(first.similarities.size(), ds.items.size());
  for (size_t i = 0; i < ds.items.size(); ++i) {
    ds.items[i].gold = 2.5 + 2.5 * first.similarities[i];
    EXPECT_NEAR(first.similarities[i],
                Cosine(model.EncodeText(Side::kSource, ds.items[i].sent1),
                       model.EncodeText(Side::kSource, ds.items[i].sent2)),
                1e-15);
  }
  EXPECT_NEAR(EvalSts(model, ds).pearson, 1.0, 1e-12);
}

TEST(EvalStsTest, RandomEncoderTracksLexicalOverlap) {
  std::vector<std::string> words;
  for (int i = 0; i < 60; ++i) words.push_back("w" + std::to_string(i));
  EncoderModel model = WordModel(words, 32);
  model.table = InitTable(model.text.vocab(), 32, InitScheme::kRandomNormalUnit, 5);
  std::mt19937 gen(4);
  StsDataset ds{"overlap", {}};
  for (int i = 0; i < 60; ++i) {
    int shared = i % 6;  // 0..5 of 5 tokens shared
    std::vector<std::string> a, b;
    for (int k = 0; k < 5; ++k) a.push_back(words[gen() % 60]);
    b = a;
    for (int k = shared; k < 5; ++k) b[k] = words[gen() % 60];
    std::string s1, s2;
    for (int k = 0; k < 5; ++k) {
      s1 += a[k] + " ";
      s2 += b[k] + " ";
    }
    ds.items.push_back({s1, s2, std::min(5.0, static_cast<double>(shared))});
  }
  EXPECT_GT(EvalSts(model, ds).pearson, 0.0);
}

TEST(EvalStsTest, AllOovIsAnError) {
  EncoderModel model = WordModel({"a"}, 3);
  model.table.row(0)[0] = 1.0;
  StsDataset ds{"oov", {{"x", "y", 1}, {"z", "q", 3}}};
  EXPECT_THROW(EvalSts(model, ds), NumericError);
}

MiningCorpus ToyCorpus() {
  MiningCorpus c;
  for (int i = 0; i < 5; ++i) {
    c.source_ids.push_back("s" + std::to_string(i));
    c.source_sentences.push_back("a" + std::to_string(i));
    c.target_ids.push_back("t" + std::to_string(i));
    c.target_sentences.push_back("b" + std::to_string(i));
    c.gold.insert({"s" + std::to_string(i), "t" + std::to_string(i)});
  }
  return c;
}

// Source i is e_i; target i is 0.9 e_i + sqrt(0.19) e_5, so gold cosines are
// 0.9 and every other pair scores 0.
EncoderModel ToyModel() {
  std::vector<std::string> words;
  for (int i = 0; i < 5; ++i) {
    words.push_back("a" + std::to_string(i));
    words.push_back("b" + std::to_string(i));
  }
  EncoderModel model = WordModel(words, 6);
  for (int i = 0; i < 5; ++i) {
    std::vector<double> a(6, 0.0), b(6, 0.0);
    a[i] = 1.0;
    b[i] = 0.9;
    b[5] = std::sqrt(0.19);
    SetRow(&model, "a" + std::to_string(i), a);
    SetRow(&model, "b" + std::to_string(i), b);
  }
  return model;
}

TEST(MineTest, ToyCorpusRecoversGold) {
  MiningCorpus corpus = ToyCorpus();
  EncoderModel model = ToyModel();
  auto scored = NearestTargets(model, corpus);
  for (const auto &p : scored) EXPECT_NEAR(p.score, 0.9, 1e-12);
  PairSet mined = Mine(model, corpus, 0.5);
  EXPECT_EQ(mined, corpus.gold);
  F1Score f1 = ComputeF1(mined, corpus.gold);
  EXPECT_DOUBLE_EQ(f1.f1, 1.0);
  EXPECT_TRUE(Mine(model, corpus, 1.01).empty());
  ThresholdChoice tuned = TuneThreshold(scored, corpus.gold);
  EXPECT_NEAR(tuned.threshold, 0.9, 1e-12);
  EXPECT_DOUBLE_EQ(tuned.score.f1, 1.0);
}

TEST(MineTest, NearestMatchesBruteForce) {
  std::mt19937 gen(5);
  std::vector<std::string> words;
  for (int i = 0; i < 80; ++i) words.push_back("w" + std::to_string(i));
  EncoderModel model = WordModel(words, 8);
  model.table = InitTable(model.text.vocab(), 8, InitScheme::kRandomNormalUnit, 6);
  oracle::Matrix rows(model.table.rows());
  for (size_t r = 0; r < rows.size(); ++r) {
    rows[r].assign(model.table.row(r).begin(), model.table.row(r).end());
  }
  MiningCorpus corpus;
  auto sentence = [&] {
    std::string s;
    size_t len = 1 + gen() % 3;
    for (size_t k = 0; k < len; ++k) s += words[gen() % 80] + " ";
    return s;
  };
  for (int i = 0; i < 400; ++i) {
    corpus.source_ids.push_back("s" + std::to_string(i));
    corpus.source_sentences.push_back(sentence());
  }
  for (int i = 0; i < 500; ++i) {
    corpus.target_ids.push_back("t" + std::to_string(i));
    corpus.target_sentences.push_back(sentence());
  }
  auto encode = [&](const std::string &s) {
    return oracle::MeanOfRows(rows, model.text.Encode(Side::kSource, s).ids, 8);
  };
  std::vector<std::vector<double>> targets;
  for (const auto &t : corpus.target_sentences) targets.push_back(encode(t));
  auto scored = NearestTargets(model, corpus, 2);
  ASSERT_EQ(scored.size(), corpus.source_ids.size());
  for (size_t i = 0; i < scored.size(); ++i) {
    auto s = encode(corpus.source_sentences[i]);
    size_t best = 0;
    double best_score = -2.0;
    for (size_t j = 0; j < targets.size(); ++j) {
      double c = oracle::CosineOf(s, targets[j]);
      if (c > best_score + 1e-12) {
        best_score = c;
        best = j;
      }
    }
    EXPECT_NEAR(scored[i].score, best_score, 1e-9);
    // Exact duplicates in the target set make several indices optimal.
    double chosen = oracle::CosineOf(
        s, targets[std::stoul(scored[i].target_id.substr(1))]);
    EXPECT_NEAR(chosen, best_score, 1e-12);
    EXPECT_LE(std::stoul(scored[i].target_id.substr(1)), best);
  }
}

TEST(MineTest, InvariantToTableScaling) {
  MiningCorpus corpus = ToyCorpus();
  EncoderModel model = ToyModel();
  std::mt19937 gen(7);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (double &v : model.table.values()) v += noise(gen);
  EncoderModel scaled = model;
  for (double &v : scaled.table.values()) v *= 17.0;
  for (double tau : {-0.5, 0.2, 0.6, 0.95}) {
    EXPECT_EQ(Mine(model, corpus, tau), Mine(scaled, corpus, tau));
  }
}

TEST(F1Test, Examples) {
  PairSet gold{{"a", "1"}, {"b", "2"}, {"c", "3"}, {"d", "4"}};
  F1Score same = ComputeF1(gold, gold);
  EXPECT_EQ(same.precision, 1.0);
  EXPECT_EQ(same.recall, 1.0);
  EXPECT_EQ(same.f1, 1.0);
  F1Score none = ComputeF1({}, gold);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  PairSet half{{"a", "1"}, {"b", "2"}, {"c", "9"}, {"x", "4"}};
  F1Score h = ComputeF1(half, gold);
  EXPECT_DOUBLE_EQ(h.precision, 0.5);
  EXPECT_DOUBLE_EQ(h.recall, 0.5);
  EXPECT_DOUBLE_EQ(h.f1, 0.5);
  EXPECT_THROW(ComputeF1(half, {}), DataError);
}

TEST(F1Test, SwapExchangesPrecisionAndRecall) {
  PairSet a{{"a", "1"}, {"b", "2"}, {"c", "3"}};
  PairSet b{{"a", "1"}, {"z", "2"}};
  F1Score ab = ComputeF1(a, b), ba = ComputeF1(b, a);
  EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
  EXPECT_DOUBLE_EQ(ab.recall, ba.precision);
  EXPECT_DOUBLE_EQ(ab.f1, ba.f1);
}

TEST(TuneThresholdTest, AllGoldPicksMinimum) {
  std::vector<ScoredPair> scored{{"a", "1", 0.7}, {"b", "2", 0.2}, {"c", "3", 0.5}};
  PairSet gold{{"a", "1"}, {"b", "2"}, {"c", "3"}};
  ThresholdChoice t = TuneThreshold(scored, gold);
  EXPECT_EQ(t.threshold, 0.2);
  EXPECT_EQ(t.score.f1, 1.0);
}

TEST(TuneThresholdTest, BeatsGridSweep) {
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ScoredPair> scored;
    PairSet gold;
    size_t n = 5 + gen() % 60;
    for (size_t i = 0; i < n; ++i) {
      std::string s = "s" + std::to_string(i);
      bool correct = gen() % 3 != 0;
      double score = u(gen) * 0.5 + (correct ? 0.4 : 0.0);
      scored.push_back({s, correct ? "t" + std::to_string(i) : "x", score});
      if (gen() % 5 != 0) gold.insert({s, "t" + std::to_string(i)});
    }
    if (gold.empty()) continue;
    ThresholdChoice tuned = TuneThreshold(scored, gold);
    double grid_best = 0.0;
    for (int k = -1000; k <= 1000; ++k) {
      double tau = k * 1e-3;
      size_t predicted = 0, hits = 0;
      for (const auto &p : scored) {
        if (p.score >= tau) {
          ++predicted;
          hits += gold.count({p.source_id, p.target_id});
        }
      }
      double f1 = predicted == 0 || hits == 0
                      ? 0.0
                      : 2.0 * hits / static_cast<double>(predicted + gold.size());
      grid_best = std::max(grid_best, f1);
    }
    EXPECT_GE(tuned.score.f1, grid_best - 1e-12);
    EXPECT_DOUBLE_EQ(ComputeF1(ApplyThreshold(scored, tuned.threshold), gold).f1,
                     tuned.score.f1);
  }
}

std::vector<AnalysisRow> HandRows() {
  return {{"aa", 60, 0.10, 0.90, {{"syntactic", 0.5}}},
          {"bb", 65, 0.20, 0.70, {{"syntactic", 0.6}}},
          {"cc", 62, 0.25, 0.80, {{"syntactic", 0.3}}},
          {"dd", 75, 0.40, 0.40, {{"syntactic", 0.4}}},
          {"ee", 80, 0.50, 0.50, {{"syntactic", 0.2}}},
          {"ff", 78, 0.60, 0.30, {{"syntactic", 0.1}}}};
}

std::optional<double> Rho(const std::vector<AnalysisRow> &rows,
                          double AnalysisRow::*field) {
  std::vector<double> sts, x;
  for (const auto &r : rows) {
    sts.push_back(r.sts);
    x.push_back(r.*field);
  }
  return 100.0 * oracle::SpearmanOf(sts, x);
}

TEST(AnalyzeTest, MatchesManualRecomputation) {
  auto rows = HandRows();
  AnalysisReport report = Analyze(rows, 0.3);
  ASSERT_EQ(report.entries.size(), 3u);
  std::vector<AnalysisRow> low(rows.begin(), rows.begin() + 3),
      high(rows.begin() + 3, rows.end());
  const std::vector<std::vector<AnalysisRow>> subsets{rows, low, high};
  for (size_t k = 0; k < 3; ++k) {
    const auto &entry = report.entries[k];
    EXPECT_EQ(entry.n, subsets[k].size());
    ASSERT_TRUE(entry.overlap && entry.distance);
    EXPECT_NEAR(*entry.overlap, *Rho(subsets[k], &AnalysisRow::overlap), 1e-9);
    EXPECT_NEAR(*entry.distance, *Rho(subsets[k], &AnalysisRow::distance), 1e-9);
    std::vector<double> sts, syn;
    for (const auto &r : subsets[k]) {
      sts.push_back(r.sts);
      syn.push_back(r.features[0].second);
    }
    ASSERT_TRUE(entry.features.at("syntactic").has_value());
    EXPECT_NEAR(*entry.features.at("syntactic"), 100.0 * oracle::SpearmanOf(sts, syn),
                1e-9);
  }
  EXPECT_NE(report.ToTsv().find("sts_vs_syntactic"), std::string::npos);
  EXPECT_FALSE(report.ToText().empty());
}

TEST(AnalyzeTest, MonotoneRelations) {
  std::vector<AnalysisRow> rows;
  for (int i = 0; i < 8; ++i) {
    rows.push_back({"l" + std::to_string(i), 50.0 + i * i, 0.1 * i, 1.0 - 0.05 * i, {}});
  }
  AnalysisReport report = Analyze(rows);
  EXPECT_NEAR(*report.entries[0].overlap, 100.0, 1e-9);
  EXPECT_NEAR(*report.entries[0].distance, -100.0, 1e-9);
}

TEST(AnalyzeTest, SmallSubsetIsUndefined) {
  auto rows = HandRows();
  rows.erase(rows.begin() + 1, rows.begin() + 3);  // one low-overlap row left
  AnalysisReport report = Analyze(rows, 0.3);
  EXPECT_EQ(report.entries[1].n, 1u);
  EXPECT_FALSE(report.entries[1].overlap.has_value());
  EXPECT_NE(report.ToTsv().find("NA"), std::string::npos);
  EXPECT_THROW(Analyze(std::span<const AnalysisRow>(rows.data(), 2)), DataError);
}

TEST(AnalyzeTest, LoadRows) {
  auto path = TempFile("paraemb_rows.tsv", "de\t70.1\t0.45\t0.3\tsyntactic=0.2\nfr\t68\t0.5\t0.25\n");
  auto rows = LoadAnalysisRows(path);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].lang, "de");
  EXPECT_EQ(rows[0].features.size(), 1u);
  EXPECT_THROW(LoadAnalysisRows(TempFile("paraemb_rows_bad.tsv", "de\t70\t1.5\t0.3\n")),
               DataError);
}

TEST(MiningCorpusTest, ValidateAndLoad) {
  MiningCorpus c = ToyCorpus();
  EXPECT_NO_THROW(c.Validate());
  c.gold.insert({"s0", "t1"});
  EXPECT_THROW(c.Validate(), DataError);
  c = ToyCorpus();
  c.gold.insert({"s9", "t1"});
  EXPECT_THROW(c.Validate(), DataError);
  std::vector<std::string> ids, sentences;
  LoadMiningSide(TempFile("paraemb_side.tsv", "x1\thello world\nx2\tbye\n"), &ids, &sentences);
  EXPECT_EQ(ids, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(sentences[0], "hello world");
  PairSet gold = LoadGold(TempFile("paraemb_gold.tsv", "x1\ty1\n"));
  EXPECT_EQ(gold.size(), 1u);
}

}  // namespace
}  // namespace paraemb
