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
#ifndef PARAEMB_SUBWORD_H_
#define PARAEMB_SUBWORD_H_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace paraemb {

struct MergeRule {
  std::string left;
  std::string right;

  bool operator==(const MergeRule &other) const = default;
};

// Greedy pair-merge subword segmenter. Every word is prefixed with the
// boundary marker (a base symbol of its own) and split into code points;
// merges are then replayed in learned order.
class SubwordModel {
 public:
  // Validates that every merge constituent is in the alphabet or produced by
  // an earlier merge, that no pair repeats, and that
  // |alphabet| + |merges| <= target_size. Throws DataError otherwise.
  SubwordModel(std::vector<MergeRule> merges, std::set<std::string> alphabet,
               size_t target_size);

  const std::vector<MergeRule> &merges() const { return merges_; }
  const std::set<std::string> &alphabet() const { return alphabet_; }
  size_t target_size() const { return target_size_; }
  std::string_view word_boundary_marker() const;

  // Appends the pieces of one word (no whitespace inside) to out. Code
  // points outside the alphabet come out as single-character pieces.
  void SegmentWord(std::string_view word, std::vector<std::string> *out) const;

  // Symbol-id form of SegmentWord. Ids index symbol(); a code point outside
  // the alphabet is appended to unknown and stands as -(its index + 1).
  void SegmentWordIds(std::string_view word, std::vector<int32_t> *ids,
                      std::vector<std::string_view> *unknown) const;

  size_t num_symbols() const { return symbols_.size(); }
  const std::string &symbol(int32_t id) const { return symbols_[id]; }

  // Text form: header line "bpe v1 <target_size>", then "left<TAB>right"
  // per merge in learned order.
  std::string Serialize() const;

  // The alphabet is not stored; it is rebuilt from the merge constituents
  // that no earlier merge produces, plus the boundary marker.
  static SubwordModel Parse(std::string_view contents);
  static SubwordModel Load(const std::string &path);
  void Save(const std::string &path) const;

 private:
  struct MergeTarget {
    int32_t rank;
    int32_t result;
  };

  int32_t Intern(const std::string &symbol);

  std::vector<MergeRule> merges_;
  std::set<std::string> alphabet_;
  size_t target_size_;

  std::vector<std::string> symbols_;
  struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::unordered_map<std::string, int32_t, StringHash, std::equal_to<>>
      symbol_ids_;
  // Symbol id of each single-byte code point, -1 if not in the alphabet.
  int32_t ascii_ids_[128];
  std::unordered_map<uint64_t, MergeTarget> merge_index_;
  int32_t marker_id_;
};

// Learns merges from a sentence stream: pair frequencies count every
// adjacent position in every word occurrence; the most frequent pair is
// merged, ties going to the lexicographically smaller (left, right). Stops
// when |alphabet| + |merges| reaches target_size or no pair occurs at least
// twice. Sentences are whitespace-split as is (normalize beforehand).
SubwordModel LearnBpe(std::span<const std::string> corpus, size_t target_size);

// Segments every whitespace-separated word of sentence.
std::vector<std::string> SegmentSp(const SubwordModel &model,
                                   std::string_view sentence);

}  // namespace paraemb

#endif  // PARAEMB_SUBWORD_H_
