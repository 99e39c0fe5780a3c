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
#include "paraemb/text.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <string>

#include "paraemb/error.h"

namespace paraemb {
namespace {

constexpr UChar32 kMarkerCodePoint = 0x2581;
constexpr UChar32 kBeginCodePoint = 0xE000;
constexpr UChar32 kEndCodePoint = 0xE001;

bool IsReserved(UChar32 c) {
  return c == kMarkerCodePoint || c == kBeginCodePoint || c == kEndCodePoint;
}

bool IsSeparator(UChar32 c) { return u_isUWhiteSpace(c) || IsReserved(c); }

bool IsAscii(std::string_view text) {
  for (unsigned char c : text) {
    if (c >= 0x80) return false;
  }
  return true;
}

}  // namespace

std::optional<size_t> FindInvalidUtf8(std::string_view text) {
  const auto *s = reinterpret_cast<const uint8_t *>(text.data());
  int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return static_cast<size_t>(start);
  }
  return std::nullopt;
}

std::string NormalizeText(std::string_view text, bool lowercase) {
  if (IsAscii(text)) {
    std::string out(text);
    if (lowercase) {
      for (char &c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      }
    }
    return out;
  }

  icu::UnicodeString ustr = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (lowercase) ustr.toLower(icu::Locale::getRoot());
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw DataError("ICU NFC normalizer unavailable");
  icu::UnicodeString normalized = nfc->normalize(ustr, status);
  if (U_FAILURE(status)) throw DataError("NFC normalization failed");

  std::string utf8;
  normalized.toUTF8String(utf8);

  // Reserved symbols become spaces.
  std::string out;
  out.reserve(utf8.size());
  const auto *s = reinterpret_cast<const uint8_t *>(utf8.data());
  int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (IsReserved(c)) {
      out.push_back(' ');
    } else {
      out.append(utf8, start, i - start);
    }
  }
  return out;
}

std::vector<std::string_view> SplitWords(std::string_view text) {
  std::vector<std::string_view> words;
  const auto *s = reinterpret_cast<const uint8_t *>(text.data());
  int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  int32_t word_start = -1;
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    if (s[i] < 0x80) {
      c = s[i++];
    } else {
      U8_NEXT(s, i, length, c);
    }
    if (IsSeparator(c)) {
      if (word_start >= 0) {
        words.push_back(text.substr(word_start, start - word_start));
        word_start = -1;
      }
    } else if (word_start < 0) {
      word_start = start;
    }
  }
  if (word_start >= 0) words.push_back(text.substr(word_start));
  return words;
}

std::vector<std::string_view> SplitCodePoints(std::string_view text) {
  std::vector<std::string_view> chars;
  chars.reserve(text.size());
  const auto *s = reinterpret_cast<const uint8_t *>(text.data());
  int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    (void)c;
    chars.push_back(text.substr(start, i - start));
  }
  return chars;
}

}  // namespace paraemb
