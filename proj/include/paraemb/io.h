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

#ifndef PARAEMB_IO_H_
#define PARAEMB_IO_H_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace paraemb {

// Fixed 9-significant-digit rendering used by every serialized float.
std::string FormatFloat(double value);

// Splits on tab characters; empty fields are kept.
std::vector<std::string_view> SplitTabs(std::string_view line);

// Calls fn(line, line_number) for every line of the file (1-based numbering,
// trailing '\r' stripped). Throws DataError if the file cannot be opened.
void ForEachLine(const std::string &path,
                 const std::function<void(std::string_view, size_t)> &fn);

std::vector<std::string> ReadLines(const std::string &path);

// Writes contents to path, replacing any existing file.
void WriteFile(const std::string &path, std::string_view contents);

// Throws DataError naming path and line if text is not valid UTF-8.
void RequireUtf8(std::string_view text, const std::string &path, size_t line);

double ParseDouble(std::string_view field, const std::string &context);
long long ParseInt(std::string_view field, const std::string &context);

}  // namespace paraemb

#endif  // PARAEMB_IO_H_
