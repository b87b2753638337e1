// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kgpf {

struct Note {
  std::string note_id;
  std::string text;
  std::vector<std::string> gold_diagnoses;  // cuis

  bool operator==(const Note&) const = default;
};

/// JSONL: {"note_id": str, "text": str, "gold_diagnoses": [cui, ...]} per line.
std::vector<Note> read_notes(const std::filesystem::path& path);
std::string notes_to_jsonl(const std::vector<Note>& notes);

}  // namespace kgpf
