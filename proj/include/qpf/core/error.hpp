// Copyright 2026 The qpf-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qpf {

/// Error categories. The numeric values double as CLI exit codes and as the
/// C API status codes.
enum class ErrorKind : int {
    Usage = 1,
    Data = 2,
    Numerical = 3,
    Internal = 4,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Bad argument, bad index, or bad configuration.
class UsageError : public Error {
  public:
    explicit UsageError(const std::string &message) : Error(ErrorKind::Usage, message) {}
};

/// Malformed, truncated, missing, or unwritable data files.
class DataError : public Error {
  public:
    explicit DataError(const std::string &message) : Error(ErrorKind::Data, message) {}
};

/// Non-finite loss or parameters during training.
class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string &message) : Error(ErrorKind::Numerical, message) {}
};

}  // namespace qpf
