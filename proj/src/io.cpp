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

#include "qpf/core/io.hpp"

#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <unistd.h>

#include "qpf/core/error.hpp"

namespace qpf::io {

std::vector<uint8_t> read_bytes(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("cannot open '{}'", path.string()));
    }
    in.seekg(0, std::ios::end);
    auto size = static_cast<size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    std::vector<uint8_t> bytes(size);
    if (!in.read(reinterpret_cast<char *>(bytes.data()), static_cast<std::streamsize>(size))) {
        throw DataError(fmt::format("failed reading '{}'", path.string()));
    }
    return bytes;
}

std::string read_text(const std::filesystem::path &path) {
    auto bytes = read_bytes(path);
    return {bytes.begin(), bytes.end()};
}

void write_atomic(const std::filesystem::path &path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    auto tmp = path;
    tmp += fmt::format(".tmp{}", ::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError(fmt::format("cannot write '{}'", tmp.string()));
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp, ec);
            throw DataError(fmt::format("failed writing '{}'", tmp.string()));
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DataError(fmt::format("cannot replace '{}'", path.string()));
    }
}

void append_line(const std::filesystem::path &path, std::string_view line) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) {
        throw DataError(fmt::format("cannot append to '{}'", path.string()));
    }
    out << line << '\n';
    out.flush();
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t end = text.find(sep, pos);
        if (end == std::string_view::npos) {
            out.emplace_back(text.substr(pos));
            return out;
        }
        out.emplace_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

std::vector<std::string> lines(std::string_view text) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        out.emplace_back(line);
        pos = end + 1;
    }
    return out;
}

}  // namespace qpf::io
