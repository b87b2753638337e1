// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

// Writes the synthetic graph + notes corpus used by the fixtures.

#include <CLI11.hpp>
#include <iostream>

#include "kgpf/error.hpp"
#include "kgpf/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic clinical KG corpus"};
  kgpf::SynthConfig cfg;
  std::string out = "data/synthetic";
  app.add_option("--out", out, "Output directory");
  app.add_option("--notes", cfg.num_notes, "Number of notes");
  app.add_option("--concepts", cfg.num_concepts, "Number of concepts");
  app.add_option("--seed", cfg.seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);
  try {
    kgpf::write_corpus(kgpf::generate_synthetic(cfg), out);
  } catch (const kgpf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
