// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/tensor_bundle.hpp"

#include <bit>
#include <cstring>
#include <json.hpp>
#include <numeric>

#include "kgpf/error.hpp"
#include "kgpf/io.hpp"
#include "kgpf/simd/kernels.hpp"

namespace kgpf {

static_assert(std::endian::native == std::endian::little, "tensor container I/O assumes a little-endian host");

namespace {

constexpr const char* kMetadataKey = "__metadata__";
// Same ceiling as the reference reader; guards against absurd allocations from corrupt files.
constexpr std::uint64_t kMaxHeaderBytes = 100'000'000;

}  // namespace

std::size_t Tensor::numel() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

TensorBundle decode_bundle(std::span<const std::uint8_t> bytes, const LoadOptions& opts) {
  if (bytes.size() < 8) throw SchemaError("file shorter than the 8-byte header length");
  std::uint64_t header_len = 0;
  std::memcpy(&header_len, bytes.data(), 8);
  if (header_len > kMaxHeaderBytes || header_len > bytes.size() - 8)
    throw SchemaError("header length " + std::to_string(header_len) + " exceeds file size");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad header JSON: ") + e.what());
  }
  if (!header.is_object()) throw SchemaError("header is not a JSON object");

  const auto payload = bytes.subspan(8 + header_len);
  TensorBundle bundle;
  std::uint64_t declared_end = 0;
  std::uint64_t covered = 0;
  try {
    for (const auto& [name, entry] : header.items()) {
      if (name == kMetadataKey) {
        for (const auto& [k, v] : entry.items()) bundle.metadata[k] = v.get<std::string>();
        continue;
      }
      const auto dtype = entry.at("dtype").get<std::string>();
      if (dtype != "F32") throw SchemaError("unsupported dtype " + dtype + " for tensor " + name);
      Tensor t;
      t.shape = entry.at("shape").get<std::vector<std::size_t>>();
      const auto offsets = entry.at("data_offsets").get<std::vector<std::uint64_t>>();
      if (offsets.size() != 2 || offsets[0] > offsets[1])
        throw SchemaError("bad data_offsets for tensor " + name);
      if (offsets[1] - offsets[0] != t.numel() * sizeof(float))
        throw SchemaError("tensor " + name + " byte range does not match its shape");
      declared_end = std::max(declared_end, offsets[1]);
      covered += offsets[1] - offsets[0];
      if (offsets[1] > payload.size()) continue;  // reported below with the overall size
      t.data.resize(t.numel());
      if (!t.data.empty()) std::memcpy(t.data.data(), payload.data() + offsets[0], offsets[1] - offsets[0]);
      bundle.tensors.emplace(name, std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad header entry: ") + e.what());
  }
  if (declared_end > payload.size()) throw SchemaError("payload shorter than header declares");
  if (covered != payload.size() || declared_end != payload.size())
    throw SchemaError("payload size does not match the tensors the header declares");

  if (!opts.allow_nonfinite) {
    const auto& k = simd::active();
    for (const auto& [name, t] : bundle.tensors) {
      if (k.count_nonfinite(t.data.data(), t.data.size()) != 0)
        throw SchemaError("tensor " + name + " contains NaN or Inf values");
    }
  }
  return bundle;
}

std::vector<std::uint8_t> encode_bundle(const TensorBundle& bundle) {
  nlohmann::ordered_json header = nlohmann::ordered_json::object();
  if (!bundle.metadata.empty()) {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : bundle.metadata) meta[k] = v;
    header[kMetadataKey] = std::move(meta);
  }
  std::uint64_t offset = 0;
  for (const auto& [name, t] : bundle.tensors) {
    if (t.data.size() != t.numel()) throw SchemaError("tensor " + name + " data length does not match shape");
    const std::uint64_t bytes = t.data.size() * sizeof(float);
    nlohmann::ordered_json e;
    e["dtype"] = "F32";
    e["shape"] = t.shape;
    e["data_offsets"] = {offset, offset + bytes};
    header[name] = std::move(e);
    offset += bytes;
  }
  std::string text = header.dump();
  while (text.size() % 8 != 0) text.push_back(' ');

  std::vector<std::uint8_t> out(8 + text.size() + offset);
  const std::uint64_t n = text.size();
  std::memcpy(out.data(), &n, 8);
  std::memcpy(out.data() + 8, text.data(), text.size());
  std::size_t pos = 8 + text.size();
  for (const auto& [name, t] : bundle.tensors) {
    if (!t.data.empty()) std::memcpy(out.data() + pos, t.data.data(), t.data.size() * sizeof(float));
    pos += t.data.size() * sizeof(float);
  }
  return out;
}

TensorBundle load_bundle(const std::filesystem::path& path, const LoadOptions& opts) {
  const auto raw = read_file(path);
  try {
    return decode_bundle({reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()}, opts);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_bundle(const TensorBundle& bundle, const std::filesystem::path& path) {
  const auto bytes = encode_bundle(bundle);
  write_file_atomic(path, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

}  // namespace kgpf
