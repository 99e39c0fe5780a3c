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
#include "paraemb/subword.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <unicode/utf8.h>

#include "paraemb/error.h"
#include "paraemb/io.h"
#include "paraemb/text.h"

namespace paraemb {
namespace {

uint64_t PairKey(int32_t left, int32_t right) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(left)) << 32) |
         static_cast<uint32_t>(right);
}

int32_t KeyLeft(uint64_t key) { return static_cast<int32_t>(key >> 32); }
int32_t KeyRight(uint64_t key) {
  return static_cast<int32_t>(key & 0xffffffffu);
}

// Replaces every non-overlapping occurrence of (left, right), scanning left
// to right. Returns true if anything changed.
bool MergeInPlace(std::vector<int32_t> *symbols, int32_t left, int32_t right,
                  int32_t result) {
  auto &s = *symbols;
  size_t out = 0;
  bool changed = false;
  for (size_t i = 0; i < s.size();) {
    if (i + 1 < s.size() && s[i] == left && s[i + 1] == right) {
      s[out++] = result;
      i += 2;
      changed = true;
    } else {
      s[out++] = s[i++];
    }
  }
  s.resize(out);
  return changed;
}

class SymbolTable {
 public:
  int32_t Intern(const std::string &symbol) {
    auto [it, inserted] =
        ids_.emplace(symbol, static_cast<int32_t>(symbols_.size()));
    if (inserted) symbols_.push_back(symbol);
    return it->second;
  }
  const std::string &operator[](int32_t id) const { return symbols_[id]; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int32_t> ids_;
};

struct PairEntry {
  int64_t count;
  int32_t left;
  int32_t right;
};

// Most frequent first; ties by (left, right) string order.
struct PairOrder {
  const SymbolTable *symbols;
  bool operator()(const PairEntry &a, const PairEntry &b) const {
    if (a.count != b.count) return a.count > b.count;
    int c = (*symbols)[a.left].compare((*symbols)[b.left]);
    if (c != 0) return c < 0;
    return (*symbols)[a.right] < (*symbols)[b.right];
  }
};

}  // namespace

SubwordModel::SubwordModel(std::vector<MergeRule> merges,
                           std::set<std::string> alphabet, size_t target_size)
    : merges_(std::move(merges)),
      alphabet_(std::move(alphabet)),
      target_size_(target_size) {
  alphabet_.insert(std::string(kWordBoundaryMarker));
  if (alphabet_.size() + merges_.size() > target_size_) {
    throw DataError("subword model has " + std::to_string(alphabet_.size()) +
                    " base symbols and " + std::to_string(merges_.size()) +
                    " merges, exceeding target size " +
                    std::to_string(target_size_));
  }
  for (const auto &symbol : alphabet_) Intern(symbol);
  for (int c = 0; c < 128; ++c) {
    const char ch = static_cast<char>(c);
    auto it = symbol_ids_.find(std::string_view(&ch, 1));
    ascii_ids_[c] = it == symbol_ids_.end() ? -1 : it->second;
  }
  marker_id_ = symbol_ids_.at(std::string(kWordBoundaryMarker));
  for (size_t rank = 0; rank < merges_.size(); ++rank) {
    const MergeRule &rule = merges_[rank];
    auto left = symbol_ids_.find(rule.left);
    auto right = symbol_ids_.find(rule.right);
    if (left == symbol_ids_.end() || right == symbol_ids_.end()) {
      throw DataError("merge " + std::to_string(rank) + " (" + rule.left +
                      ", " + rule.right +
                      ") uses a symbol not derivable from earlier merges");
    }
    uint64_t key = PairKey(left->second, right->second);
    int32_t result = Intern(rule.left + rule.right);
    auto [it, inserted] =
        merge_index_.emplace(key, MergeTarget{static_cast<int32_t>(rank),
                                              result});
    if (!inserted) {
      throw DataError("merge " + std::to_string(rank) + " repeats pair (" +
                      rule.left + ", " + rule.right + ")");
    }
  }
}

int32_t SubwordModel::Intern(const std::string &symbol) {
  auto [it, inserted] =
      symbol_ids_.emplace(symbol, static_cast<int32_t>(symbols_.size()));
  if (inserted) symbols_.push_back(symbol);
  return it->second;
}

std::string_view SubwordModel::word_boundary_marker() const {
  return kWordBoundaryMarker;
}

void SubwordModel::SegmentWord(std::string_view word,
                               std::vector<std::string> *out) const {
  std::vector<std::string_view> unknown;
  std::vector<int32_t> ids;
  SegmentWordIds(word, &ids, &unknown);
  for (int32_t id : ids) {
    if (id >= 0) {
      out->push_back(symbols_[id]);
    } else {
      out->emplace_back(unknown[-id - 1]);
    }
  }
}

void SubwordModel::SegmentWordIds(std::string_view word,
                                  std::vector<int32_t> *out,
                                  std::vector<std::string_view> *unknown) const {
  std::vector<int32_t> &ids = *out;
  ids.clear();
  unknown->clear();
  ids.reserve(word.size() + 1);
  ids.push_back(marker_id_);
  const auto *bytes = reinterpret_cast<const uint8_t *>(word.data());
  const int32_t length = static_cast<int32_t>(word.size());
  for (int32_t i = 0; i < length;) {
    const int32_t start = i;
    if (bytes[i] < 0x80) {
      ++i;
      if (ascii_ids_[bytes[start]] >= 0) {
        ids.push_back(ascii_ids_[bytes[start]]);
        continue;
      }
    } else {
      UChar32 c;
      U8_NEXT(bytes, i, length, c);
      (void)c;
      auto it = symbol_ids_.find(word.substr(start, i - start));
      if (it != symbol_ids_.end()) {
        ids.push_back(it->second);
        continue;
      }
    }
    unknown->push_back(word.substr(start, i - start));
    ids.push_back(-static_cast<int32_t>(unknown->size()));
  }

  int32_t last_rank = -1;
  while (ids.size() > 1) {
    const MergeTarget *best = nullptr;
    int32_t best_left = 0, best_right = 0;
    for (size_t i = 0; i + 1 < ids.size(); ++i) {
      if (ids[i] < 0 || ids[i + 1] < 0) continue;
      auto it = merge_index_.find(PairKey(ids[i], ids[i + 1]));
      if (it == merge_index_.end()) continue;
      const MergeTarget &target = it->second;
      if (target.rank > last_rank &&
          (best == nullptr || target.rank < best->rank)) {
        best = &target;
        best_left = ids[i];
        best_right = ids[i + 1];
      }
    }
    if (best == nullptr) break;
    MergeInPlace(&ids, best_left, best_right, best->result);
    last_rank = best->rank;
  }
}

std::string SubwordModel::Serialize() const {
  std::string out = "bpe v1 " + std::to_string(target_size_) + "\n";
  for (const MergeRule &rule : merges_) {
    out += rule.left;
    out += '\t';
    out += rule.right;
    out += '\n';
  }
  return out;
}

SubwordModel SubwordModel::Parse(std::string_view contents) {
  std::istringstream in{std::string(contents)};
  std::string line;
  if (!std::getline(in, line)) throw DataError("subword model: empty file");
  constexpr std::string_view kHeader = "bpe v1 ";
  if (line.rfind(kHeader, 0) != 0) {
    throw DataError("subword model: bad header '" + line + "'");
  }
  long long target =
      ParseInt(std::string_view(line).substr(kHeader.size()),
               "subword model header");
  if (target <= 0) throw DataError("subword model: target size must be > 0");

  std::vector<MergeRule> merges;
  std::set<std::string> alphabet;
  std::unordered_set<std::string> produced;
  size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError("subword model line " + std::to_string(number) +
                      ": expected left<TAB>right");
    }
    MergeRule rule{std::string(fields[0]), std::string(fields[1])};
    for (const std::string *part : {&rule.left, &rule.right}) {
      if (!produced.count(*part)) alphabet.insert(*part);
    }
    produced.insert(rule.left + rule.right);
    merges.push_back(std::move(rule));
  }
  return SubwordModel(std::move(merges), std::move(alphabet),
                      static_cast<size_t>(target));
}

SubwordModel SubwordModel::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

void SubwordModel::Save(const std::string &path) const {
  WriteFile(path, Serialize());
}

SubwordModel LearnBpe(std::span<const std::string> corpus,
                      size_t target_size) {
  std::map<std::string, int64_t> word_counts;
  for (const std::string &sentence : corpus) {
    for (std::string_view word : SplitWords(sentence)) {
      ++word_counts[std::string(word)];
    }
  }
  if (word_counts.empty()) throw DataError("learn_bpe: empty corpus");

  SymbolTable symbols;
  std::set<std::string> alphabet;
  const int32_t marker = symbols.Intern(std::string(kWordBoundaryMarker));
  alphabet.insert(std::string(kWordBoundaryMarker));

  struct Word {
    std::vector<int32_t> symbols;
    int64_t count;
  };
  std::vector<Word> words;
  words.reserve(word_counts.size());
  for (const auto &[text, count] : word_counts) {
    Word word{{marker}, count};
    for (std::string_view ch : SplitCodePoints(text)) {
      std::string symbol(ch);
      alphabet.insert(symbol);
      word.symbols.push_back(symbols.Intern(symbol));
    }
    words.push_back(std::move(word));
  }
  if (target_size < alphabet.size()) {
    throw DataError("learn_bpe: target size " + std::to_string(target_size) +
                    " is smaller than the alphabet size " +
                    std::to_string(alphabet.size()));
  }

  std::unordered_map<uint64_t, int64_t> counts;
  std::unordered_map<uint64_t, std::vector<int32_t>> where;
  for (size_t w = 0; w < words.size(); ++w) {
    const auto &s = words[w].symbols;
    for (size_t i = 0; i + 1 < s.size(); ++i) {
      uint64_t key = PairKey(s[i], s[i + 1]);
      counts[key] += words[w].count;
      auto &list = where[key];
      if (list.empty() || list.back() != static_cast<int32_t>(w)) {
        list.push_back(static_cast<int32_t>(w));
      }
    }
  }

  std::set<PairEntry, PairOrder> queue(PairOrder{&symbols});
  for (const auto &[key, count] : counts) {
    queue.insert(PairEntry{count, KeyLeft(key), KeyRight(key)});
  }

  std::vector<MergeRule> merges;
  std::unordered_set<uint64_t> learned;
  while (alphabet.size() + merges.size() < target_size && !queue.empty()) {
    PairEntry best = *queue.begin();
    if (best.count < 2) break;
    queue.erase(queue.begin());
    uint64_t best_key = PairKey(best.left, best.right);
    counts.erase(best_key);
    learned.insert(best_key);

    const std::string merged = symbols[best.left] + symbols[best.right];
    const int32_t result = symbols.Intern(merged);
    merges.push_back(MergeRule{symbols[best.left], symbols[best.right]});

    std::vector<int32_t> affected = std::move(where[best_key]);
    where.erase(best_key);
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()),
                   affected.end());

    std::map<uint64_t, int64_t> delta;
    for (int32_t w : affected) {
      Word &word = words[w];
      std::vector<int32_t> updated = word.symbols;
      if (!MergeInPlace(&updated, best.left, best.right, result)) continue;
      for (size_t i = 0; i + 1 < word.symbols.size(); ++i) {
        delta[PairKey(word.symbols[i], word.symbols[i + 1])] -= word.count;
      }
      for (size_t i = 0; i + 1 < updated.size(); ++i) {
        uint64_t key = PairKey(updated[i], updated[i + 1]);
        delta[key] += word.count;
        if (updated[i] == result || updated[i + 1] == result) {
          where[key].push_back(w);
        }
      }
      word.symbols = std::move(updated);
    }

    for (const auto &[key, change] : delta) {
      if (change == 0 || learned.count(key)) continue;
      auto it = counts.find(key);
      int64_t old_count = it == counts.end() ? 0 : it->second;
      if (old_count > 0) {
        queue.erase(PairEntry{old_count, KeyLeft(key), KeyRight(key)});
      }
      int64_t new_count = old_count + change;
      if (new_count > 0) {
        counts[key] = new_count;
        queue.insert(PairEntry{new_count, KeyLeft(key), KeyRight(key)});
      } else if (it != counts.end()) {
        counts.erase(it);
      }
    }
  }

  return SubwordModel(std::move(merges), std::move(alphabet), target_size);
}

std::vector<std::string> SegmentSp(const SubwordModel &model,
                                   std::string_view sentence) {
  std::vector<std::string> pieces;
  for (std::string_view word : SplitWords(sentence)) {
    model.SegmentWord(word, &pieces);
  }
  return pieces;
}

}  // namespace paraemb
