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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qpf::io {

/// Whole file as bytes. Throws DataError if it cannot be read.
std::vector<uint8_t> read_bytes(const std::filesystem::path &path);
std::string read_text(const std::filesystem::path &path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file. Creates parent directories.
void write_atomic(const std::filesystem::path &path, std::string_view contents);

/// Appends one line and flushes.
void append_line(const std::filesystem::path &path, std::string_view line);

/// Splits on `sep`, keeping empty fields.
std::vector<std::string> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

/// Lines of `text` without trailing '\r'; the last line may lack '\n'.
std::vector<std::string> lines(std::string_view text);

}  // namespace qpf::io
