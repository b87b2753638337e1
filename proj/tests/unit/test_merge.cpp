// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include <doctest.h>

#include <bit>
#include <cmath>

#include "fixtures.hpp"
#include "kgpf/error.hpp"
#include "kgpf/merge.hpp"

using namespace kgpf;
using namespace kgpf::testing;

namespace {

TensorBundle vec(std::vector<float> v) {
  TensorBundle b;
  b.tensors["w"] = Tensor{{v.size()}, std::move(v)};
  return b;
}

std::pair<TensorBundle, TensorBundle> random_pair(std::uint64_t seed) {
  Rng rng(seed);
  TensorBundle a, b;
  for (int t = 0; t < 3; ++t) {
    const std::size_t n = 1 + rng.below(70);
    Tensor x{{n}, {}}, y{{n}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      x.data.push_back(static_cast<float>(rng.normal() * 100));
      y.data.push_back(static_cast<float>(rng.normal() * 1e-3));
    }
    a.tensors["t" + std::to_string(t)] = x;
    b.tensors["t" + std::to_string(t)] = y;
  }
  return {a, b};
}

bool bit_equal(const TensorBundle& x, const TensorBundle& y) {
  if (x.tensors.size() != y.tensors.size()) return false;
  for (const auto& [name, t] : x.tensors) {
    const auto& u = y.tensors.at(name);
    if (t.shape != u.shape || t.data.size() != u.data.size()) return false;
    for (std::size_t i = 0; i < t.data.size(); ++i)
      if (std::bit_cast<std::uint32_t>(t.data[i]) != std::bit_cast<std::uint32_t>(u.data[i])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("formula on fixture vectors") {
  CHECK(weighted_merge(vec({1, 0}), vec({0, 1}), 0.7).tensors.at("w").data == std::vector<float>{0.7f, 0.3f});
  CHECK(weighted_merge(vec({2}), vec({4}), 0.5).tensors.at("w").data == std::vector<float>{3});
  CHECK(doge_merge(vec({0}), vec({10})).tensors.at("w").data == std::vector<float>{5});
  CHECK(merge_label(0.7, "P@10", "P@2") == "0.7 P@10 + 0.3 P@2");
}

TEST_CASE("endpoints are bit-exact") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [a, b] = random_pair(seed);
    CHECK(bit_equal(weighted_merge(a, b, 1.0), a));
    CHECK(bit_equal(weighted_merge(a, b, 0.0), b));
    CHECK(bit_equal(doge_merge(a, a), a));
  }
  // -0.0 survives the endpoint
  CHECK(std::signbit(weighted_merge(vec({-0.0f}), vec({1}), 1.0).tensors.at("w").data[0]));
}

TEST_CASE("doge merge commutes and equals lambda one half") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [a, b] = random_pair(seed);
    CHECK(bit_equal(doge_merge(a, b), doge_merge(b, a)));
    CHECK(bit_equal(doge_merge(a, b), weighted_merge(a, b, 0.5)));
  }
}

TEST_CASE("merged values stay within the endpoints") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [a, b] = random_pair(seed);
    for (double lambda : {0.1, 0.3, 0.7, 0.9}) {
      const auto m = weighted_merge(a, b, lambda);
      for (const auto& [name, t] : m.tensors)
        for (std::size_t i = 0; i < t.data.size(); ++i) {
          const float x = a.tensors.at(name).data[i], y = b.tensors.at(name).data[i];
          CHECK(t.data[i] >= std::nextafter(std::min(x, y), -INFINITY));
          CHECK(t.data[i] <= std::nextafter(std::max(x, y), INFINITY));
        }
    }
  }
}

TEST_CASE("schema mismatches are rejected") {
  auto a = vec({1, 2});
  auto b = vec({1, 2});
  b.tensors["extra"] = Tensor{{1}, {0}};
  a.tensors["solo"] = Tensor{{1}, {0}};
  CHECK_THROWS_WITH_AS(weighted_merge(a, b, 0.7),
                       "tensor name sets differ; only in first: [solo], only in second: [extra]", SchemaError);
  CHECK_THROWS_WITH_AS(weighted_merge(vec({1, 2}), vec({1, 2, 3}), 0.7), "shape mismatch for tensor w", SchemaError);
  CHECK_THROWS_AS(weighted_merge(vec({1}), vec({1}), 1.5), UsageError);
}

TEST_CASE("excluded tensors are copied from the first bundle") {
  auto a = vec({1, 1});
  auto b = vec({3, 3});
  a.tensors["norm.stats"] = Tensor{{1}, {10}};
  b.tensors["norm.stats"] = Tensor{{1}, {20}};
  MergeOptions opts;
  opts.exclude.emplace_back("norm\\..*");
  const auto m = weighted_merge(a, b, 0.5, opts);
  CHECK(m.tensors.at("norm.stats").data == std::vector<float>{10});
  CHECK(m.tensors.at("w").data == std::vector<float>{2, 2});
}
