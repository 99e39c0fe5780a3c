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

#ifndef PARAEMB_ERROR_H_
#define PARAEMB_ERROR_H_

#include <stdexcept>
#include <string>

namespace paraemb {

// Failure classes. The CLI maps them to distinct exit codes.
enum class ErrorKind { kUsage = 1, kData = 2, kNumeric = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Bad arguments or configuration.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string &what)
      : Error(ErrorKind::kUsage, what) {}
};

// Malformed or degenerate input data.
class DataError : public Error {
 public:
  explicit DataError(const std::string &what)
      : Error(ErrorKind::kData, what) {}
};

// Non-finite values or undefined statistics.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string &what)
      : Error(ErrorKind::kNumeric, what) {}
};

}  // namespace paraemb

#endif  // PARAEMB_ERROR_H_
