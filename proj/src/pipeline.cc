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
#include "paraemb/pipeline.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "paraemb/error.h"
#include "paraemb/io.h"
#include "paraemb/text.h"

namespace paraemb {
namespace {

std::string ReadAll(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> NormalizeAll(std::span<const std::string> sentences,
                                      bool lowercase) {
  std::vector<std::string> out;
  out.reserve(sentences.size());
  for (const std::string &s : sentences) {
    out.push_back(NormalizeText(s, lowercase));
  }
  return out;
}

}  // namespace

std::string_view SideName(Side side) {
  return side == Side::kSource ? "src" : "tgt";
}

Side ParseSide(std::string_view name) {
  if (name == "src" || name == "source") return Side::kSource;
  if (name == "tgt" || name == "target") return Side::kTarget;
  throw UsageError("unknown side '" + std::string(name) +
                   "' (expected src or tgt)");
}

TextPipeline::TextPipeline(Tokenizer source, Tokenizer target,
                           Vocabulary vocab)
    : source_(std::move(source)),
      target_(std::move(target)),
      vocab_(std::move(vocab)) {
  if (source_.kind() != vocab_.kind() || target_.kind() != vocab_.kind()) {
    throw UsageError("tokenizer kinds do not match the vocabulary kind");
  }
  BuildSymbolMaps();
}

void TextPipeline::BuildSymbolMaps() {
  auto build = [&](const Tokenizer &tok, std::vector<int32_t> *map) {
    map->clear();
    if (tok.subword() == nullptr) return;
    const SubwordModel &model = *tok.subword();
    map->resize(model.num_symbols());
    for (size_t i = 0; i < model.num_symbols(); ++i) {
      auto id = vocab_.Find(tok.prefix() + model.symbol(static_cast<int32_t>(i)));
      (*map)[i] = id ? *id : -1;
    }
  };
  build(source_, &source_symbols_);
  build(target_, &target_symbols_);
}

TokenSeq TextPipeline::Encode(Side side, std::string_view sentence) const {
  const Tokenizer &tok = tokenizer(side);
  if (tok.subword() == nullptr) return vocab_.Lookup(tok.Tokens(sentence));

  const std::vector<int32_t> &map = symbol_map(side);
  const std::string normalized = NormalizeText(sentence, tok.lowercase());
  TokenSeq seq;
  std::vector<int32_t> ids;
  std::vector<std::string_view> unknown;
  for (std::string_view word : SplitWords(normalized)) {
    tok.subword()->SegmentWordIds(word, &ids, &unknown);
    for (int32_t id : ids) {
      std::optional<int32_t> row;
      if (id >= 0) {
        if (map[id] >= 0) row = map[id];
      } else {
        row = vocab_.Find(tok.prefix() + std::string(unknown[-id - 1]));
      }
      if (row) {
        seq.ids.push_back(*row);
      } else {
        ++seq.n_oov;
      }
    }
  }
  return seq;
}

void TextPipeline::Save(const std::string &dir) const {
  std::filesystem::create_directories(dir);
  const bool shared = source_.subword() == target_.subword();
  nlohmann::ordered_json config;
  config["format"] = "paraemb-tokenizer v1";
  config["kind"] = std::string(KindName(kind()));
  config["lowercase"] = source_.lowercase();
  if (vocab_.cap()) {
    config["cap"] = *vocab_.cap();
  } else {
    config["cap"] = nullptr;
  }
  auto side_config = [&](const Tokenizer &tokenizer, const std::string &bpe) {
    nlohmann::ordered_json side;
    side["lowercase"] = tokenizer.lowercase();
    side["prefix"] = tokenizer.prefix();
    if (tokenizer.subword()) {
      side["bpe"] = bpe;
    } else {
      side["bpe"] = nullptr;
    }
    return side;
  };
  config["source"] = side_config(source_, "source.bpe");
  config["target"] = side_config(target_, shared ? "source.bpe" : "target.bpe");
  config["vocab"] = "vocab.tsv";

  std::filesystem::path base(dir);
  if (source_.subword()) source_.subword()->Save((base / "source.bpe").string());
  if (target_.subword() && !shared) {
    target_.subword()->Save((base / "target.bpe").string());
  }
  WriteFile((base / "vocab.tsv").string(), vocab_.Serialize());
  WriteFile((base / "tokenizer.json").string(), config.dump(2) + "\n");
}

TextPipeline TextPipeline::Load(const std::string &dir) {
  std::filesystem::path base(dir);
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(ReadAll((base / "tokenizer.json").string()));
  } catch (const nlohmann::json::exception &e) {
    throw DataError(dir + "/tokenizer.json: " + e.what());
  }
  try {
    TokenizerKind kind = ParseKind(config.at("kind").get<std::string>());
    std::map<std::string, std::shared_ptr<const SubwordModel>> models;
    auto make_side = [&](const nlohmann::json &side) {
      std::shared_ptr<const SubwordModel> subword;
      if (!side.at("bpe").is_null()) {
        std::string file = side.at("bpe").get<std::string>();
        auto &slot = models[file];
        if (!slot) {
          slot = std::make_shared<SubwordModel>(
              SubwordModel::Load((base / file).string()));
        }
        subword = slot;
      }
      return Tokenizer(kind, side.at("lowercase").get<bool>(), subword,
                       side.at("prefix").get<std::string>());
    };
    Tokenizer source = make_side(config.at("source"));
    Tokenizer target = make_side(config.at("target"));
    Vocabulary parsed = Vocabulary::Parse(
        kind, ReadAll((base / config.at("vocab").get<std::string>()).string()));
    std::optional<size_t> cap;
    if (config.contains("cap") && !config.at("cap").is_null()) {
      cap = config.at("cap").get<size_t>();
    }
    Vocabulary vocab(kind, parsed.entries(), cap);
    return TextPipeline(std::move(source), std::move(target), std::move(vocab));
  } catch (const nlohmann::json::exception &e) {
    throw DataError(dir + "/tokenizer.json: " + e.what());
  }
}

TextPipeline LearnPipeline(std::span<const std::string> source,
                           std::span<const std::string> target,
                           const PipelineOptions &options) {
  std::vector<std::string> norm_source =
      NormalizeAll(source, options.lowercase);
  std::vector<std::string> norm_target =
      NormalizeAll(target, options.lowercase);

  std::shared_ptr<const SubwordModel> source_model, target_model;
  if (options.kind == TokenizerKind::kSp) {
    if (options.joint) {
      std::vector<std::string> both = norm_source;
      both.insert(both.end(), norm_target.begin(), norm_target.end());
      source_model =
          std::make_shared<SubwordModel>(LearnBpe(both, options.sp_size));
      target_model = source_model;
    } else {
      source_model = std::make_shared<SubwordModel>(
          LearnBpe(norm_source, options.sp_size));
      target_model = std::make_shared<SubwordModel>(
          LearnBpe(norm_target, options.sp_size));
    }
  }
  Tokenizer source_tokenizer(options.kind, options.lowercase, source_model, "");
  Tokenizer target_tokenizer(options.kind, options.lowercase, target_model,
                             options.target_prefix);

  VocabCounter counter;
  for (const std::string &s : norm_source) {
    counter.Add(source_tokenizer.TokensOfNormalized(s));
  }
  for (const std::string &s : norm_target) {
    counter.Add(target_tokenizer.TokensOfNormalized(s));
  }
  return TextPipeline(std::move(source_tokenizer), std::move(target_tokenizer),
                      counter.Build(options.kind, options.cap));
}

}  // namespace paraemb
