// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/notes.hpp"

#include <json.hpp>

#include "kgpf/error.hpp"
#include "kgpf/io.hpp"

namespace kgpf {

std::vector<Note> read_notes(const std::filesystem::path& path) {
  std::vector<Note> notes;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto where = path.string() + ":" + std::to_string(i + 1);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
      Note n;
      n.note_id = j.at("note_id").get<std::string>();
      n.text = j.at("text").get<std::string>();
      n.gold_diagnoses = j.value("gold_diagnoses", std::vector<std::string>{});
      notes.push_back(std::move(n));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": bad note record: " + e.what());
    }
  }
  return notes;
}

std::string notes_to_jsonl(const std::vector<Note>& notes) {
  std::string out;
  for (const auto& n : notes) {
    nlohmann::ordered_json j;
    j["note_id"] = n.note_id;
    j["text"] = n.text;
    j["gold_diagnoses"] = n.gold_diagnoses;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace kgpf
