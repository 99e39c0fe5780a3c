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
#ifndef PARAEMB_TEXT_H_
#define PARAEMB_TEXT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace paraemb {

// Reserved symbols. Normalization maps any occurrence in input text to a
// space, so they never appear inside a word.
inline constexpr std::string_view kWordBoundaryMarker = "\xE2\x96\x81";  // U+2581
inline constexpr std::string_view kTrigramBegin = "\xEE\x80\x80";  // U+E000
inline constexpr std::string_view kTrigramEnd = "\xEE\x80\x81";  // U+E001

// Returns the byte offset of the first invalid UTF-8 sequence, or nullopt if
// the text is well formed.
std::optional<size_t> FindInvalidUtf8(std::string_view text);

// NFC normalization, optional lowercasing, and replacement of reserved
// symbols by spaces. Input must be valid UTF-8.
std::string NormalizeText(std::string_view text, bool lowercase);

// Splits on Unicode whitespace (and reserved symbols). Views point into text.
std::vector<std::string_view> SplitWords(std::string_view text);

// Splits into code points; each element is the UTF-8 encoding of one.
std::vector<std::string_view> SplitCodePoints(std::string_view text);

}  // namespace paraemb

#endif  // PARAEMB_TEXT_H_
