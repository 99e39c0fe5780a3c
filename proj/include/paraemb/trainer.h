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
#ifndef PARAEMB_TRAINER_H_
#define PARAEMB_TRAINER_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "paraemb/batching.h"
#include "paraemb/eval.h"
#include "paraemb/model.h"
#include "paraemb/objective.h"
#include "paraemb/pipeline.h"

namespace paraemb {

// Aligned raw sentence pairs.
struct Bitext {
  std::string source_lang = "src";
  std::string target_lang = "tgt";
  std::vector<std::string> source;
  std::vector<std::string> target;
  // Pairs dropped at load time because a side was empty after normalization.
  size_t dropped = 0;

  size_t size() const { return source.size(); }
};

// Line i of each file forms pair i. Throws DataError on a line-count
// mismatch (naming both counts) or invalid UTF-8 (naming the line).
Bitext LoadBitext(const std::string &source_path,
                  const std::string &target_path);
// "src<TAB>tgt" per line.
Bitext LoadBitextTsv(const std::string &path);

struct Checkpoint {
  EncoderModel model;
  TrainConfig config;
  int epoch = 0;
  std::optional<double> dev_score;

  // Directory layout: the tokenizer files of TextPipeline::Save, model.emb,
  // and the model.json sidecar.
  void Save(const std::string &dir) const;
  static Checkpoint Load(const std::string &dir);
};

struct EpochStats {
  int epoch = 0;
  // Summed hinge over every minibatch of the epoch.
  double loss = 0.0;
  int64_t pairs = 0;
  int64_t active_pairs = 0;
  int64_t skipped_pairs = 0;
  int64_t skipped_megabatches = 0;
  int64_t minibatches = 0;
  std::optional<double> dev_score;

  double mean_loss() const { return pairs > 0 ? loss / pairs : 0.0; }
};

struct TrainOptions {
  // Workers for negative selection and dev evaluation; updates stay serial.
  int threads = 1;
  std::function<void(const EpochStats &)> on_epoch;
};

struct TrainResult {
  Checkpoint best;
  std::vector<EpochStats> history;
  // Pairs with no in-vocabulary token on some side, excluded from training.
  size_t unusable_pairs = 0;
};

// Tokenizes the bitext, assigning text ids so that string-identical
// normalized sentences share one id.
std::vector<TrainingPair> PreparePairs(const TextPipeline &text,
                                       const Bitext &bitext,
                                       size_t *unusable = nullptr);

// Runs config.epochs epochs of mega-batch negative selection followed by
// per-minibatch loss, gradient and Adam update. With a dev set, the
// epoch-end checkpoint of highest dev Pearson r is returned (earliest on
// ties); otherwise the last one. epochs == 0 returns the initial model.
TrainResult Train(const TrainConfig &config, const TextPipeline &text,
                  const Bitext &bitext, const StsDataset *dev = nullptr,
                  const TrainOptions &options = {});

}  // namespace paraemb

#endif  // PARAEMB_TRAINER_H_
