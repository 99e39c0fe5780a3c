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
#include "commands.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>

#include "paraemb/bench.h"
#include "paraemb/error.h"
#include "paraemb/eval.h"
#include "paraemb/io.h"
#include "paraemb/subword.h"
#include "paraemb/text.h"
#include "paraemb/trainer.h"

namespace paraemb::cli {
namespace {

namespace fs = std::filesystem;

void Log(const std::string &line) { std::fprintf(stderr, "%s\n", line.c_str()); }

std::string CommandPath(const CLI::App *app) {
  std::string path;
  for (const CLI::App *a = app; a != nullptr; a = a->get_parent()) {
    path = path.empty() ? a->get_name() : a->get_name() + " " + path;
  }
  return path;
}

bool IsFlag(const CLI::Option *opt) { return opt->get_expected_min() == 0; }

// key=value for every option of the subcommand, in registration order.
std::string ResolvedConfig(const CLI::App *app) {
  std::string out = "# " + CommandPath(app) + "\n";
  for (const CLI::Option *opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string &key = opt->get_lnames().front();
    if (key == "help" || key == "config") continue;
    std::string value;
    if (opt->count() == 0) {
      value = opt->get_default_str();
    } else if (IsFlag(opt)) {
      value = opt->as<bool>() ? "true" : "false";
    } else if (opt->get_multi_option_policy() == CLI::MultiOptionPolicy::TakeAll) {
      for (const auto &r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->results().back();
    }
    out += key + "=" + value + "\n";
  }
  return out;
}

void WriteConfigForDir(const CLI::App *app, const std::string &dir) {
  fs::create_directories(dir);
  WriteFile((fs::path(dir) / "run.config").string(), ResolvedConfig(app));
}

void WriteConfigForFile(const CLI::App *app, const std::string &file) {
  if (file.empty() || file == "-") return;
  WriteFile(file + ".config", ResolvedConfig(app));
}

// Text goes to path, or stdout when path is empty or "-".
void Emit(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    WriteFile(path, text);
  }
}

void AddConfigOption(CLI::App *app) {
  app->add_option("--config", "Flat key=value file of option defaults")
      ->default_str("");
}

CLI::Option *AddSwitch(CLI::App *app, const std::string &names, bool *value,
                       const std::string &help) {
  return app->add_flag(names, *value, help)->default_str(*value ? "true" : "false");
}

CLI::Option *AddThreads(CLI::App *app, int *threads) {
  return app->add_option("--threads", *threads, "Worker threads")
      ->check(CLI::PositiveNumber);
}

// Tokenizer learned inline, or loaded from a 'vocab learn' directory.
struct TokenizerFlags {
  std::string dir;
  std::string kind = "sp";
  size_t size = 20000;
  size_t cap = 0;
  bool joint = true;
  bool lowercase = true;
  std::string prefix;

  void Register(CLI::App *app, bool allow_dir) {
    if (allow_dir) {
      app->add_option("--tokenizer", dir,
                      "Directory written by 'vocab learn' (skips learning)");
    }
    app->add_option("--kind", kind, "Tokenizer: sp, trigram or word")
        ->check(CLI::IsMember({"sp", "trigram", "word"}));
    app->add_option("--size", size, "Subword inventory size (sp)")
        ->check(CLI::PositiveNumber);
    app->add_option("--cap", cap, "Keep only the N most frequent types (0: no cap)");
    AddSwitch(app, "--joint,!--separate", &joint,
              "One subword model over both sides, or one per side");
    AddSwitch(app, "--lowercase,!--cased", &lowercase, "Lowercase before tokenizing");
    app->add_option("--prefix-marker", prefix,
                    "Prefix for target-side tokens; disables row sharing");
  }

  PipelineOptions Options() const {
    PipelineOptions o;
    o.kind = ParseKind(kind);
    o.sp_size = size;
    if (cap > 0) o.cap = cap;
    o.joint = joint;
    o.lowercase = lowercase;
    o.target_prefix = prefix;
    return o;
  }

  TextPipeline Build(const Bitext &bitext) const {
    if (!dir.empty()) return TextPipeline::Load(dir);
    return LearnPipeline(bitext.source, bitext.target, Options());
  }
};

struct BitextFlags {
  std::string src, tgt, tsv;

  void Register(CLI::App *app) {
    auto *s = app->add_option("--src", src, "Source sentences, one per line");
    auto *t = app->add_option("--tgt", tgt, "Target sentences, line-aligned with --src");
    auto *p = app->add_option("--tsv", tsv, "Bitext as src<TAB>tgt lines");
    s->needs(t);
    t->needs(s);
    p->excludes(s)->excludes(t);
  }

  Bitext Load() const {
    if (!tsv.empty()) return LoadBitextTsv(tsv);
    if (src.empty()) throw UsageError("give the bitext as --src/--tgt or --tsv");
    return LoadBitext(src, tgt);
  }
};

void LogBitext(const Bitext &b) {
  Log("bitext: " + std::to_string(b.size()) + " pairs" +
      (b.dropped ? ", " + std::to_string(b.dropped) + " empty pairs dropped" : ""));
}

// ---- vocab learn ----

void AddVocab(CLI::App *app) {
  CLI::App *vocab = app->add_subcommand("vocab", "Tokenizer and vocabulary tools");
  vocab->require_subcommand(1);
  CLI::App *learn = vocab->add_subcommand("learn", "Learn tokenizers and the joint vocabulary");
  auto tok = std::make_shared<TokenizerFlags>();
  auto text = std::make_shared<BitextFlags>();
  auto out = std::make_shared<std::string>();
  AddConfigOption(learn);
  text->Register(learn);
  tok->Register(learn, false);
  learn->add_option("--out", *out, "Output directory")->required();
  learn->callback([learn, tok, text, out] {
    Bitext bitext = text->Load();
    LogBitext(bitext);
    TextPipeline pipeline = LearnPipeline(bitext.source, bitext.target, tok->Options());
    pipeline.Save(*out);
    WriteConfigForDir(learn, *out);
    std::cout << "vocab_size\t" << pipeline.vocab().size() << "\n";
  });
}

// ---- train / random-baseline ----

struct TrainFlags {
  TrainConfig config;
  std::string negative_mode = "bilingual";
  std::string dev;
  std::string out;
  int threads = 1;

  void Register(CLI::App *app) {
    app->add_option("--margin", config.margin, "Hinge margin")
        ->check(CLI::PositiveNumber);
    app->add_option("--megabatch-cap", config.megabatch_cap, "Largest mega-batch, in minibatches")
        ->check(CLI::PositiveNumber);
    app->add_option("--anneal-rate", config.anneal_rate,
                    "Minibatches per mega-batch size increment")
        ->check(CLI::PositiveNumber);
    app->add_option("--minibatch", config.minibatch_size, "Pairs per minibatch")
        ->check(CLI::PositiveNumber);
    app->add_option("--dropout", config.dropout, "Embedding dropout rate")
        ->check(CLI::Range(0.0, 0.999999));
    app->add_option("--lr", config.learning_rate, "Adam learning rate")
        ->check(CLI::PositiveNumber);
    app->add_option("--epochs", config.epochs, "Training epochs")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--dim", config.dim, "Embedding dimension")->check(CLI::PositiveNumber);
    app->add_option("--seed", config.seed, "Random seed");
    app->add_option("--negative-mode", negative_mode, "monolingual or bilingual")
        ->check(CLI::IsMember({"monolingual", "bilingual"}));
    app->add_option("--dev", dev, "STS file for model selection");
    app->add_option("--out", out, "Checkpoint directory")->required();
    AddThreads(app, &threads);
  }
};

std::string HistoryTsv(const std::vector<EpochStats> &history) {
  std::string out =
      "epoch\tloss\tmean_loss\tpairs\tactive_pairs\tskipped_pairs\t"
      "skipped_megabatches\tminibatches\tdev_pearson\n";
  for (const auto &s : history) {
    out += std::to_string(s.epoch) + "\t" + FormatFloat(s.loss) + "\t" +
           FormatFloat(s.mean_loss()) + "\t" + std::to_string(s.pairs) + "\t" +
           std::to_string(s.active_pairs) + "\t" + std::to_string(s.skipped_pairs) +
           "\t" + std::to_string(s.skipped_megabatches) + "\t" +
           std::to_string(s.minibatches) + "\t" +
           (s.dev_score ? FormatFloat(*s.dev_score) : "NA") + "\n";
  }
  return out;
}

void AddTrain(CLI::App *app) {
  CLI::App *train = app->add_subcommand("train", "Train an encoder on bitext");
  auto tok = std::make_shared<TokenizerFlags>();
  auto text = std::make_shared<BitextFlags>();
  auto flags = std::make_shared<TrainFlags>();
  AddConfigOption(train);
  text->Register(train);
  tok->Register(train, true);
  flags->Register(train);
  train->callback([train, tok, text, flags] {
    TrainConfig config = flags->config;
    config.negative_mode = ParseNegativeMode(flags->negative_mode);
    config.Validate();
    Bitext bitext = text->Load();
    LogBitext(bitext);
    TextPipeline pipeline = tok->Build(bitext);
    Log("vocabulary: " + std::to_string(pipeline.vocab().size()) + " " +
        std::string(KindName(pipeline.kind())) + " tokens");
    std::optional<StsDataset> dev;
    if (!flags->dev.empty()) dev = StsDataset::Load(flags->dev);

    TrainOptions options;
    options.threads = flags->threads;
    options.on_epoch = [](const EpochStats &s) {
      Log("epoch " + std::to_string(s.epoch) + ": loss " + FormatFloat(s.loss) +
          ", active " + std::to_string(s.active_pairs) + "/" + std::to_string(s.pairs) +
          (s.dev_score ? ", dev r " + FormatFloat(*s.dev_score) : ""));
    };
    TrainResult result =
        Train(config, pipeline, bitext, dev ? &*dev : nullptr, options);
    if (result.unusable_pairs > 0) {
      Log(std::to_string(result.unusable_pairs) +
          " pairs had no in-vocabulary token on some side and were skipped");
    }
    result.best.Save(flags->out);
    WriteFile((fs::path(flags->out) / "train_log.tsv").string(),
              HistoryTsv(result.history));
    WriteConfigForDir(train, flags->out);
    std::cout << "best_epoch\t" << result.best.epoch << "\n";
    if (result.best.dev_score) {
      std::cout << "dev_pearson\t" << FormatFloat(*result.best.dev_score) << "\n";
    }
  });
}

void AddRandomBaseline(CLI::App *app) {
  CLI::App *rb = app->add_subcommand(
      "random-baseline", "Untrained encoder with N(0, 1) embeddings");
  auto tok = std::make_shared<TokenizerFlags>();
  auto text = std::make_shared<BitextFlags>();
  auto dim = std::make_shared<int>(300);
  auto seed = std::make_shared<uint64_t>(1);
  auto out = std::make_shared<std::string>();
  AddConfigOption(rb);
  text->Register(rb);
  tok->Register(rb, true);
  rb->add_option("--dim", *dim, "Embedding dimension")->check(CLI::PositiveNumber);
  rb->add_option("--seed", *seed, "Random seed");
  rb->add_option("--out", *out, "Checkpoint directory")->required();
  rb->callback([rb, tok, text, dim, seed, out] {
    Bitext bitext;
    if (tok->dir.empty()) bitext = text->Load();
    TextPipeline pipeline = tok->Build(bitext);
    TrainConfig config;
    config.dim = *dim;
    config.seed = *seed;
    config.epochs = 0;
    Checkpoint checkpoint{
        EncoderModel{pipeline, InitTable(pipeline.vocab(), static_cast<size_t>(*dim),
                                         InitScheme::kRandomNormalUnit, *seed)},
        config, 0, std::nullopt};
    checkpoint.Save(*out);
    WriteConfigForDir(rb, *out);
    std::cout << "vocab_size\t" << pipeline.vocab().size() << "\n";
  });
}

// ---- encode ----

Side SideFlag(const std::string &name) { return ParseSide(name); }

void AddEncode(CLI::App *app) {
  CLI::App *enc = app->add_subcommand("encode", "Embed sentences, one per line");
  struct Flags {
    std::string model, in = "-", out = "-", side = "src";
    size_t batch = 128;
    int threads = 1;
  };
  auto f = std::make_shared<Flags>();
  AddConfigOption(enc);
  enc->add_option("--model", f->model, "Checkpoint directory")->required();
  enc->add_option("--in", f->in, "Input file, '-' for stdin");
  enc->add_option("--out", f->out, "Output TSV, '-' for stdout");
  enc->add_option("--side", f->side, "Tokenizer side: src or tgt")
      ->check(CLI::IsMember({"src", "tgt"}));
  enc->add_option("--batch", f->batch, "Sentences per encoding batch")
      ->check(CLI::PositiveNumber);
  AddThreads(enc, &f->threads);
  enc->callback([enc, f] {
    Checkpoint checkpoint = Checkpoint::Load(f->model);
    const EncoderModel &model = checkpoint.model;
    const Side side = SideFlag(f->side);

    std::ifstream file;
    std::istream *in = &std::cin;
    if (f->in != "-") {
      file.open(f->in, std::ios::binary);
      if (!file) throw DataError("cannot open " + f->in);
      in = &file;
    }
    std::ofstream out_file;
    std::ostream *out = &std::cout;
    if (f->out != "-") {
      out_file.open(f->out, std::ios::binary | std::ios::trunc);
      if (!out_file) throw DataError("cannot write " + f->out);
      out = &out_file;
    }

    size_t line_no = 0, oov_sentences = 0;
    std::vector<TokenSeq> batch;
    auto flush = [&] {
      auto vecs = EncodeBatch(model.table, model.spec(), batch, f->threads);
      std::string text;
      const size_t first = line_no - batch.size() + 1;
      for (size_t i = 0; i < vecs.size(); ++i) {
        if (vecs[i].n_tokens_used == 0) ++oov_sentences;
        text += std::to_string(first + i);
        for (double v : vecs[i].values) text += "\t" + FormatFloat(v);
        text += '\n';
      }
      *out << text;
      batch.clear();
    };
    const std::string source_name = f->in == "-" ? "<stdin>" : f->in;
    std::string line;
    while (std::getline(*in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      ++line_no;
      RequireUtf8(line, source_name, line_no);
      batch.push_back(model.text.Encode(side, line));
      if (batch.size() == f->batch) flush();
    }
    if (!batch.empty()) flush();
    out->flush();
    if (oov_sentences > 0) {
      Log(std::to_string(oov_sentences) +
          " sentences had no in-vocabulary token (zero vectors)");
    }
    WriteConfigForFile(enc, f->out);
  });
}

// ---- eval sts ----

void AddEval(CLI::App *app) {
  CLI::App *eval = app->add_subcommand("eval", "Evaluation");
  eval->require_subcommand(1);
  CLI::App *sts = eval->add_subcommand("sts", "Pearson r against STS gold scores");
  struct Flags {
    std::string model, aggregate = "macro", dump, out = "-", side1 = "src",
                                          side2 = "src";
    std::vector<std::string> data;
    int threads = 1;
  };
  auto f = std::make_shared<Flags>();
  AddConfigOption(sts);
  sts->add_option("--model", f->model, "Checkpoint directory")->required();
  sts->add_option("--data", f->data, "STS files sent1<TAB>sent2<TAB>score")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',');
  sts->add_option("--aggregate", f->aggregate,
                  "macro (mean of r) or weighted (by item count)")
      ->check(CLI::IsMember({"macro", "weighted"}));
  sts->add_option("--side1", f->side1, "Tokenizer side for sent1")
      ->check(CLI::IsMember({"src", "tgt"}));
  sts->add_option("--side2", f->side2, "Tokenizer side for sent2")
      ->check(CLI::IsMember({"src", "tgt"}));
  sts->add_option("--dump", f->dump, "Per-item similarities TSV");
  sts->add_option("--out", f->out, "Report TSV, '-' for stdout");
  AddThreads(sts, &f->threads);
  sts->callback([sts, f] {
    Checkpoint checkpoint = Checkpoint::Load(f->model);
    std::string report = "dataset\tn\tpearson\tzero_vector_items\n";
    std::string dump = "dataset\titem\tsimilarity\tgold\n";
    double sum = 0.0, weighted = 0.0;
    size_t items = 0;
    for (const std::string &path : f->data) {
      StsDataset ds = StsDataset::Load(path);
      StsResult r = EvalSts(checkpoint.model, ds, SideFlag(f->side1),
                            SideFlag(f->side2), f->threads);
      report += ds.name + "\t" + std::to_string(ds.items.size()) + "\t" +
                FormatFloat(r.pearson) + "\t" + std::to_string(r.zero_vector_items) + "\n";
      for (size_t i = 0; i < r.similarities.size(); ++i) {
        dump += ds.name + "\t" + std::to_string(i + 1) + "\t" +
                FormatFloat(r.similarities[i]) + "\t" + FormatFloat(ds.items[i].gold) + "\n";
      }
      sum += r.pearson;
      weighted += r.pearson * static_cast<double>(ds.items.size());
      items += ds.items.size();
    }
    const double aggregate = f->aggregate == "macro"
                                 ? sum / static_cast<double>(f->data.size())
                                 : weighted / static_cast<double>(items);
    report += "aggregate:" + f->aggregate + "\t" + std::to_string(items) + "\t" +
              FormatFloat(aggregate) + "\tNA\n";
    Emit(f->out, report);
    if (!f->dump.empty()) WriteFile(f->dump, dump);
    WriteConfigForFile(sts, f->out);
  });
}

// ---- mine ----

MiningCorpus LoadCorpus(const std::string &src, const std::string &tgt,
                        const std::string &gold) {
  MiningCorpus corpus;
  LoadMiningSide(src, &corpus.source_ids, &corpus.source_sentences);
  LoadMiningSide(tgt, &corpus.target_ids, &corpus.target_sentences);
  if (!gold.empty()) corpus.gold = LoadGold(gold);
  corpus.Validate();
  return corpus;
}

void AddMine(CLI::App *app) {
  CLI::App *mine = app->add_subcommand(
      "mine", "Bitext mining by nearest neighbour and a tuned threshold");
  struct Flags {
    std::string model, tune_src, tune_tgt, tune_gold, test_src, test_tgt, test_gold,
        out = "-", report;
    double threshold = 0.0;
    int threads = 1;
  };
  auto f = std::make_shared<Flags>();
  AddConfigOption(mine);
  mine->add_option("--model", f->model, "Checkpoint directory")->required();
  auto *ts = mine->add_option("--tune-src", f->tune_src, "Tuning split source id<TAB>sentence");
  auto *tt = mine->add_option("--tune-tgt", f->tune_tgt, "Tuning split target id<TAB>sentence");
  auto *tg = mine->add_option("--tune-gold", f->tune_gold, "Tuning split gold src_id<TAB>tgt_id");
  ts->needs(tt)->needs(tg);
  tt->needs(ts);
  tg->needs(ts);
  auto *es = mine->add_option("--test-src", f->test_src, "Test split source")->required();
  auto *et = mine->add_option("--test-tgt", f->test_tgt, "Test split target")->required();
  mine->add_option("--test-gold", f->test_gold, "Test split gold, for scoring");
  (void)es;
  (void)et;
  auto *th = mine->add_option("--threshold", f->threshold,
                              "Fixed cosine threshold instead of tuning");
  th->excludes(ts);
  mine->add_option("--out", f->out, "Predicted pairs TSV, '-' for stdout");
  mine->add_option("--report", f->report, "Score report TSV (default: stderr)");
  AddThreads(mine, &f->threads);
  mine->callback([mine, f, th] {
    if (f->tune_src.empty() && th->count() == 0) {
      throw UsageError("mine needs --tune-src/--tune-tgt/--tune-gold or --threshold");
    }
    Checkpoint checkpoint = Checkpoint::Load(f->model);
    std::string report;
    double threshold = f->threshold;
    if (!f->tune_src.empty()) {
      MiningCorpus tune = LoadCorpus(f->tune_src, f->tune_tgt, f->tune_gold);
      auto scored = NearestTargets(checkpoint.model, tune, f->threads);
      ThresholdChoice choice = TuneThreshold(scored, tune.gold);
      threshold = choice.threshold;
      report += "tune_f1\t" + FormatFloat(choice.score.f1) + "\n";
    }
    report = "threshold\t" + FormatFloat(threshold) + "\n" + report;
    MiningCorpus test = LoadCorpus(f->test_src, f->test_tgt, f->test_gold);
    auto scored = NearestTargets(checkpoint.model, test, f->threads);
    std::string predictions;
    PairSet predicted;
    for (const ScoredPair &p : scored) {
      if (p.score < threshold) continue;
      predicted.emplace(p.source_id, p.target_id);
      predictions += p.source_id + "\t" + p.target_id + "\t" + FormatFloat(p.score) + "\n";
    }
    report += "predicted\t" + std::to_string(predicted.size()) + "\n";
    if (!f->test_gold.empty()) {
      F1Score score = ComputeF1(predicted, test.gold);
      report += "precision\t" + FormatFloat(score.precision) + "\nrecall\t" +
                FormatFloat(score.recall) + "\nf1\t" + FormatFloat(score.f1) + "\n";
    }
    Emit(f->out, predictions);
    if (f->report.empty()) {
      std::fprintf(stderr, "%s", report.c_str());
    } else {
      WriteFile(f->report, report);
    }
    WriteConfigForFile(mine, f->out == "-" ? f->report : f->out);
  });
}

// ---- bench ----

void AddBench(CLI::App *app) {
  CLI::App *bench = app->add_subcommand("bench", "Encoding throughput");
  struct Flags {
    std::string model, corpus, out, side = "src";
    size_t count = 128000, batch = 128, warmup = 2, sp_size = 20000,
           vocab_sample = 10000;
    int dim = 300, threads = 1;
    uint64_t seed = 1;
    bool tokenization = true;
  };
  auto f = std::make_shared<Flags>();
  AddConfigOption(bench);
  bench->add_option("--model", f->model,
                    "Checkpoint directory (default: an untrained sp model)");
  bench->add_option("--corpus", f->corpus,
                    "Sentence-per-line file to sample (default: synthetic text)");
  bench->add_option("--count", f->count, "Sentences to encode")->check(CLI::PositiveNumber);
  bench->add_option("--batch", f->batch, "Sentences per batch")->check(CLI::PositiveNumber);
  bench->add_option("--warmup", f->warmup, "Untimed warmup batches");
  bench->add_option("--seed", f->seed, "Sampling and initialization seed");
  bench->add_option("--dim", f->dim, "Dimension of the default model")
      ->check(CLI::PositiveNumber);
  bench->add_option("--sp-size", f->sp_size, "Subword inventory of the default model")
      ->check(CLI::PositiveNumber);
  bench->add_option("--vocab-sample", f->vocab_sample,
                    "Sentences used to learn the default model's tokenizer")
      ->check(CLI::PositiveNumber);
  AddSwitch(bench, "--tokenization,!--no-tokenization", &f->tokenization,
            "Include tokenization in the timed region");
  bench->add_option("--side", f->side, "Tokenizer side")->check(CLI::IsMember({"src", "tgt"}));
  bench->add_option("--out", f->out, "Report TSV");
  AddThreads(bench, &f->threads);
  bench->callback([bench, f] {
    std::vector<std::string> sentences =
        f->corpus.empty() ? SyntheticSentences(f->count, f->seed)
                          : SampleSentences(f->corpus, f->count, f->seed);
    EncoderModel model;
    if (!f->model.empty()) {
      model = Checkpoint::Load(f->model).model;
    } else {
      std::span<const std::string> sample(
          sentences.data(), std::min(sentences.size(), f->vocab_sample));
      PipelineOptions options;
      options.sp_size = f->sp_size;
      TextPipeline text = LearnPipeline(sample, sample, options);
      model = EncoderModel{text, InitTable(text.vocab(), static_cast<size_t>(f->dim),
                                           InitScheme::kTrained, f->seed)};
    }
    BenchOptions options;
    options.batch_size = f->batch;
    options.warmup_batches = f->warmup;
    options.include_tokenization = f->tokenization;
    options.threads = f->threads;
    options.side = SideFlag(f->side);
    BenchReport report = MeasureThroughput(model, sentences, options);
    std::cout << report.ToText();
    if (!f->out.empty()) {
      WriteFile(f->out, report.ToTsv());
      WriteConfigForFile(bench, f->out);
    }
  });
}

// ---- analyze ----

Vocabulary CorpusSpVocab(const std::string &path, size_t size, size_t cap) {
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) RequireUtf8(lines[i], path, i + 1);
  SubwordModel bpe = LearnBpe(lines, size);
  std::vector<std::vector<std::vector<std::string>>> streams(1);
  for (const auto &line : lines) streams[0].push_back(SegmentSp(bpe, line));
  std::optional<size_t> limit;
  if (cap > 0) limit = cap;
  return BuildVocab(streams, TokenizerKind::kSp, limit);
}

void AddAnalyze(CLI::App *app) {
  CLI::App *analyze = app->add_subcommand("analyze", "Language-choice analysis");
  analyze->require_subcommand(1);

  CLI::App *overlap = analyze->add_subcommand(
      "overlap", "Fraction of English subword types found in another language");
  struct OverlapFlags {
    std::string english, other, out = "-";
    size_t size = 20000, cap = 0;
  };
  auto o = std::make_shared<OverlapFlags>();
  AddConfigOption(overlap);
  overlap->add_option("--english", o->english, "English corpus, one sentence per line")
      ->required();
  overlap->add_option("--other", o->other, "Other-language corpus")->required();
  overlap->add_option("--size", o->size, "Subword inventory size per corpus")
      ->check(CLI::PositiveNumber);
  overlap->add_option("--cap", o->cap, "Keep only the N most frequent pieces (0: all)");
  overlap->add_option("--out", o->out, "Report TSV, '-' for stdout");
  overlap->callback([overlap, o] {
    Vocabulary en = CorpusSpVocab(o->english, o->size, o->cap);
    Vocabulary xx = CorpusSpVocab(o->other, o->size, o->cap);
    Emit(o->out, "english_types\t" + std::to_string(en.size()) + "\nother_types\t" +
                     std::to_string(xx.size()) + "\nsp_overlap\t" +
                     FormatFloat(SpOverlap(en, xx)) + "\n");
    WriteConfigForFile(overlap, o->out);
  });

  CLI::App *correlate = analyze->add_subcommand(
      "correlate", "Spearman correlations of STS score with overlap and distance");
  struct CorrelateFlags {
    std::string rows, out = "-", text;
    double split = 0.3;
  };
  auto c = std::make_shared<CorrelateFlags>();
  AddConfigOption(correlate);
  correlate->add_option("--rows", c->rows, "lang<TAB>sts<TAB>overlap<TAB>distance[...]")
      ->required();
  correlate->add_option("--split", c->split, "Overlap split between the two subsets");
  correlate->add_option("--out", c->out, "Report TSV, '-' for stdout");
  correlate->add_option("--text", c->text, "Human-readable report (default: stderr)");
  correlate->callback([correlate, c] {
    AnalysisReport report = Analyze(LoadAnalysisRows(c->rows), c->split);
    Emit(c->out, report.ToTsv());
    if (c->text.empty()) {
      std::fprintf(stderr, "%s", report.ToText().c_str());
    } else {
      WriteFile(c->text, report.ToText());
    }
    WriteConfigForFile(correlate, c->out);
  });
}

std::string Trim(std::string s) {
  const char *ws = " \t\r";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

}  // namespace

void AddCommands(CLI::App *app) {
  AddVocab(app);
  AddTrain(app);
  AddRandomBaseline(app);
  AddEncode(app);
  AddEval(app);
  AddMine(app);
  AddBench(app);
  AddAnalyze(app);
}

std::vector<std::string> ExpandConfig(const CLI::App &app,
                                      std::vector<std::string> args) {
  const CLI::App *sub = &app;
  size_t path_end = 0;
  while (path_end < args.size() && !args[path_end].starts_with("-")) {
    const CLI::App *next = sub->get_subcommand_no_throw(args[path_end]);
    if (next == nullptr) break;
    sub = next;
    ++path_end;
  }

  std::string config_path;
  std::vector<std::string> rest;
  for (size_t i = path_end; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      config_path = args[++i];
    } else if (args[i].starts_with("--config=")) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return args;

  auto given = [&](const CLI::Option *opt) {
    for (const std::string &arg : rest) {
      if (!arg.starts_with("--")) continue;
      if (opt->check_name(arg.substr(0, arg.find('=')))) return true;
    }
    return false;
  };

  std::vector<std::string> expanded(args.begin(), args.begin() + path_end);
  ForEachLine(config_path, [&](std::string_view raw, size_t line_no) {
    std::string line = Trim(std::string(raw));
    if (line.empty() || line[0] == '#') return;
    size_t eq = line.find('=');
    const std::string where = config_path + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw UsageError(where + ": expected key=value");
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    const CLI::Option *opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config" || key == "help") {
      throw UsageError(where + ": unknown key '" + key + "' for '" +
                       CommandPath(sub) + "'");
    }
    if (given(opt)) return;
    if (value.size() >= 2 && value.front() == '\'' && value.back() == '\'') {
      value = value.substr(1, value.size() - 2);
    }
    if (value.empty() && !IsFlag(opt)) return;
    expanded.push_back("--" + key + "=" + value);
  });
  expanded.insert(expanded.end(), rest.begin(), rest.end());
  return expanded;
}

}  // namespace paraemb::cli
