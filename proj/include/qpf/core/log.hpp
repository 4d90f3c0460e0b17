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

#include <functional>
#include <string_view>

#include <fmt/format.h>

namespace qpf::log {

enum class Level { Info = 0, Warning = 1, Error = 2 };

using Sink = std::function<void(Level, std::string_view)>;

/// Replaces the process-wide sink. An empty sink restores the default, which
/// writes to stderr.
void set_sink(Sink sink);

void write(Level level, std::string_view message);

template <typename... Args>
void info(fmt::format_string<Args...> format, Args &&...args) {
    write(Level::Info, fmt::format(format, std::forward<Args>(args)...));
}

template <typename... Args>
void warn(fmt::format_string<Args...> format, Args &&...args) {
    write(Level::Warning, fmt::format(format, std::forward<Args>(args)...));
}

}  // namespace qpf::log
