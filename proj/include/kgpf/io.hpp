// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kgpf {

/// Writes via a sibling temp file and rename so readers never see partial output.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Lines without trailing '\n' / '\r'. A final empty line is dropped.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace kgpf
