// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace kgpf {

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<float> data;  // row-major, F32

  std::size_t numel() const;
  bool operator==(const Tensor&) const = default;
};

/// Named F32 tensors plus the optional string metadata block of the container.
struct TensorBundle {
  std::map<std::string, Tensor> tensors;
  std::map<std::string, std::string> metadata;

  bool operator==(const TensorBundle&) const = default;
};

struct LoadOptions {
  bool allow_nonfinite = false;
};

/// Container layout: u64 little-endian header length N, N bytes of JSON header
/// (name -> {"dtype","shape","data_offsets"}, optional "__metadata__"), raw little-endian payload.
TensorBundle decode_bundle(std::span<const std::uint8_t> bytes, const LoadOptions& opts = {});

/// Canonical encoding: tensors in name order, contiguous offsets, header padded with spaces to 8 bytes.
std::vector<std::uint8_t> encode_bundle(const TensorBundle& bundle);

TensorBundle load_bundle(const std::filesystem::path& path, const LoadOptions& opts = {});
void save_bundle(const TensorBundle& bundle, const std::filesystem::path& path);

}  // namespace kgpf
