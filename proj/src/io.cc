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
#include "paraemb/io.h"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "paraemb/error.h"
#include "paraemb/text.h"

namespace paraemb {

std::string FormatFloat(double value) {
  char buffer[32];
  int n = std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return std::string(buffer, n);
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

void ForEachLine(const std::string &path,
                 const std::function<void(std::string_view, size_t)> &fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(line, number);
  }
}

std::vector<std::string> ReadLines(const std::string &path) {
  std::vector<std::string> lines;
  ForEachLine(path, [&](std::string_view line, size_t) {
    lines.emplace_back(line);
  });
  return lines;
}

void WriteFile(const std::string &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("write failed for " + path);
}

void RequireUtf8(std::string_view text, const std::string &path, size_t line) {
  if (auto offset = FindInvalidUtf8(text)) {
    throw DataError(path + ":" + std::to_string(line) +
                    ": invalid UTF-8 at byte " + std::to_string(*offset));
  }
}

double ParseDouble(std::string_view field, const std::string &context) {
  // strtod needs a terminated buffer; fields are short.
  std::string text(field);
  char *end = nullptr;
  double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw DataError(context + ": not a number: '" + text + "'");
  }
  return value;
}

long long ParseInt(std::string_view field, const std::string &context) {
  long long value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError(context + ": not an integer: '" + std::string(field) +
                    "'");
  }
  return value;
}

}  // namespace paraemb
