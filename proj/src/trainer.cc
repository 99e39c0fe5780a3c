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
#include "paraemb/trainer.h"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unordered_map>

#include "paraemb/error.h"
#include "paraemb/io.h"
#include "paraemb/text.h"

namespace paraemb {
namespace {

bool NormalizesToEmpty(const std::string &line) {
  return SplitWords(NormalizeText(line, false)).empty();
}

std::string ReadAll(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Keeps serialized floats at 9 significant digits.
double Rounded(double value) { return std::stod(FormatFloat(value)); }

nlohmann::ordered_json ConfigToJson(const TrainConfig &config) {
  nlohmann::ordered_json j;
  j["margin"] = Rounded(config.margin);
  j["megabatch_cap"] = config.megabatch_cap;
  j["anneal_rate"] = config.anneal_rate;
  j["minibatch_size"] = config.minibatch_size;
  j["dropout"] = Rounded(config.dropout);
  j["learning_rate"] = Rounded(config.learning_rate);
  j["epochs"] = config.epochs;
  j["dim"] = config.dim;
  j["seed"] = config.seed;
  j["negative_mode"] = std::string(NegativeModeName(config.negative_mode));
  return j;
}

TrainConfig ConfigFromJson(const nlohmann::json &j) {
  TrainConfig config;
  config.margin = j.at("margin").get<double>();
  config.megabatch_cap = j.at("megabatch_cap").get<int>();
  config.anneal_rate = j.at("anneal_rate").get<int>();
  config.minibatch_size = j.at("minibatch_size").get<int>();
  config.dropout = j.at("dropout").get<double>();
  config.learning_rate = j.at("learning_rate").get<double>();
  config.epochs = j.at("epochs").get<int>();
  config.dim = j.at("dim").get<int>();
  config.seed = j.at("seed").get<uint64_t>();
  config.negative_mode =
      ParseNegativeMode(j.at("negative_mode").get<std::string>());
  return config;
}

void AddPair(Bitext *bitext, std::string source, std::string target) {
  if (NormalizesToEmpty(source) || NormalizesToEmpty(target)) {
    ++bitext->dropped;
    return;
  }
  bitext->source.push_back(std::move(source));
  bitext->target.push_back(std::move(target));
}

}  // namespace

Bitext LoadBitext(const std::string &source_path,
                  const std::string &target_path) {
  std::vector<std::string> source = ReadLines(source_path);
  std::vector<std::string> target = ReadLines(target_path);
  if (source.size() != target.size()) {
    throw DataError("bitext line counts differ: " + source_path + " has " +
                    std::to_string(source.size()) + ", " + target_path +
                    " has " + std::to_string(target.size()));
  }
  Bitext bitext;
  for (size_t i = 0; i < source.size(); ++i) {
    RequireUtf8(source[i], source_path, i + 1);
    RequireUtf8(target[i], target_path, i + 1);
    AddPair(&bitext, std::move(source[i]), std::move(target[i]));
  }
  return bitext;
}

Bitext LoadBitextTsv(const std::string &path) {
  Bitext bitext;
  ForEachLine(path, [&](std::string_view line, size_t number) {
    RequireUtf8(line, path, number);
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(path + ":" + std::to_string(number) +
                      ": expected src<TAB>tgt");
    }
    AddPair(&bitext, std::string(line.substr(0, tab)),
            std::string(line.substr(tab + 1)));
  });
  return bitext;
}

void Checkpoint::Save(const std::string &dir) const {
  model.text.Save(dir);
  std::filesystem::path base(dir);
  WriteFile((base / "model.emb").string(), model.SerializeTable());

  const Tokenizer &src = model.text.tokenizer(Side::kSource);
  const Tokenizer &tgt = model.text.tokenizer(Side::kTarget);
  nlohmann::ordered_json sidecar;
  sidecar["format"] = "paraemb-model v1";
  sidecar["model_file"] = "model.emb";
  sidecar["init"] = std::string(InitSchemeName(model.table.init_scheme()));
  sidecar["tokenizer"] = {
      {"config_file", "tokenizer.json"},
      {"kind", std::string(KindName(model.text.kind()))},
      {"lowercase", src.lowercase()},
      {"joint_subword", src.subword() == tgt.subword()},
      {"source_prefix", src.prefix()},
      {"target_prefix", tgt.prefix()},
      {"vocab_size", model.text.vocab().size()}};
  sidecar["train_config"] = ConfigToJson(config);
  sidecar["seed"] = config.seed;
  sidecar["epoch"] = epoch;
  if (dev_score) {
    sidecar["dev_score"] = Rounded(*dev_score);
  } else {
    sidecar["dev_score"] = nullptr;
  }
  WriteFile((base / "model.json").string(), sidecar.dump(2) + "\n");
}

Checkpoint Checkpoint::Load(const std::string &dir) {
  std::filesystem::path base(dir);
  Checkpoint checkpoint{EncoderModel{TextPipeline::Load(dir), {}}, {}, 0, {}};
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(ReadAll((base / "model.json").string()));
    checkpoint.config = ConfigFromJson(sidecar.at("train_config"));
    checkpoint.epoch = sidecar.at("epoch").get<int>();
    if (!sidecar.at("dev_score").is_null()) {
      checkpoint.dev_score = sidecar.at("dev_score").get<double>();
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError(dir + "/model.json: " + e.what());
  }
  const std::string model_file = sidecar.value("model_file", "model.emb");
  EmbeddingTable parsed = EncoderModel::ParseTable(
      ReadAll((base / model_file).string()), checkpoint.model.text);
  const std::string init = sidecar.value("init", "trained");
  EmbeddingTable table(parsed.rows(), parsed.dim(),
                       init == "random-normal-unit"
                           ? InitScheme::kRandomNormalUnit
                           : InitScheme::kTrained);
  std::copy(parsed.values().begin(), parsed.values().end(),
            table.values().begin());
  checkpoint.model.table = std::move(table);
  return checkpoint;
}

std::vector<TrainingPair> PreparePairs(const TextPipeline &text,
                                       const Bitext &bitext,
                                       size_t *unusable) {
  std::unordered_map<std::string, int32_t> text_ids;
  auto text_id = [&](Side side, const std::string &sentence) {
    std::string key =
        NormalizeText(sentence, text.tokenizer(side).lowercase());
    auto [it, inserted] =
        text_ids.emplace(std::move(key), static_cast<int32_t>(text_ids.size()));
    return it->second;
  };

  std::vector<TrainingPair> pairs;
  pairs.reserve(bitext.size());
  size_t skipped = 0;
  for (size_t i = 0; i < bitext.size(); ++i) {
    TrainingPair pair;
    pair.source = text.Encode(Side::kSource, bitext.source[i]);
    pair.target = text.Encode(Side::kTarget, bitext.target[i]);
    if (pair.source.ids.empty() || pair.target.ids.empty()) {
      ++skipped;
      continue;
    }
    pair.source_text = text_id(Side::kSource, bitext.source[i]);
    pair.target_text = text_id(Side::kTarget, bitext.target[i]);
    pairs.push_back(std::move(pair));
  }
  if (unusable != nullptr) *unusable = skipped;
  return pairs;
}

TrainResult Train(const TrainConfig &config, const TextPipeline &text,
                  const Bitext &bitext, const StsDataset *dev,
                  const TrainOptions &options) {
  config.Validate();
  if (bitext.size() == 0) throw DataError("train: empty bitext");
  if (dev != nullptr) {
    dev->Validate();
    std::vector<double> gold = dev->gold();
    if (std::all_of(gold.begin(), gold.end(),
                    [&](double g) { return g == gold.front(); })) {
      throw DataError("dev set " + dev->name +
                      " has constant gold scores; Pearson r is undefined");
    }
  }

  TrainResult result;
  std::vector<TrainingPair> pairs =
      PreparePairs(text, bitext, &result.unusable_pairs);
  if (pairs.empty()) {
    throw DataError("train: no pair has in-vocabulary tokens on both sides");
  }

  const size_t dim = static_cast<size_t>(config.dim);
  EncoderModel model{
      text, InitTable(text.vocab(), dim, InitScheme::kTrained, config.seed)};
  AdamState adam(model.table);
  const EncoderSpec train_spec{text.kind(), dim, config.dropout, true};
  std::seed_seq dropout_seed{static_cast<uint32_t>(config.seed),
                             static_cast<uint32_t>(config.seed >> 32),
                             0x64726f70u};
  std::mt19937_64 dropout_rng(dropout_seed);

  auto evaluate = [&](const EncoderModel &m) -> std::optional<double> {
    if (dev == nullptr) return std::nullopt;
    return EvalSts(m, *dev, Side::kSource, Side::kSource, options.threads)
        .pearson;
  };

  if (config.epochs == 0) {
    result.best = Checkpoint{model, config, 0, evaluate(model)};
    return result;
  }

  int64_t processed = 0;
  bool have_best = false;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochStats stats;
    stats.epoch = epoch;
    EpochIterator batches(pairs.size(), config.minibatch_size, config.seed,
                          epoch, config.anneal_rate, config.megabatch_cap,
                          processed);
    MegaBatch megabatch;
    while (batches.Next(&megabatch)) {
      try {
        SelectNegatives(&megabatch, pairs, model.table, train_spec,
                        config.negative_mode, options.threads);
      } catch (const DataError &) {
        ++stats.skipped_megabatches;
        continue;
      }
      for (size_t k = 0; k < megabatch.num_minibatches(); ++k) {
        std::vector<TrainingTriple> triples =
            MinibatchTriples(megabatch, k, pairs, config.negative_mode);
        LossResult step = LossAndGrads(model.table, train_spec, triples,
                                       config.margin, &dropout_rng);
        AdamStep(&model.table, step.grads, &adam, config.learning_rate);
        stats.loss += step.loss;
        stats.pairs += static_cast<int64_t>(triples.size());
        stats.active_pairs += step.active;
        stats.skipped_pairs += step.skipped;
        ++stats.minibatches;
      }
    }
    processed = batches.minibatches_processed();

    EncoderModel snapshot = model;
    snapshot.table.RoundToFloat();
    stats.dev_score = evaluate(snapshot);
    result.history.push_back(stats);
    if (options.on_epoch) options.on_epoch(stats);

    const bool better =
        !have_best || dev == nullptr || *stats.dev_score > *result.best.dev_score;
    if (better) {
      result.best = Checkpoint{std::move(snapshot), config, epoch,
                               stats.dev_score};
      have_best = true;
    }
  }
  return result;
}

}  // namespace paraemb
