// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kgpf {

/// A token of a source string with its byte span.
struct Token {
  std::string text;  // lowercased
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Splits on runs of ASCII non-alphanumerics and lowercases ASCII letters.
/// Bytes >= 0x80 are kept inside tokens so UTF-8 sequences stay intact.
std::vector<Token> tokenize(std::string_view text);

/// Token strings only.
std::vector<std::string> tokenize_words(std::string_view text);

/// Lowercase, punctuation to single spaces, whitespace collapsed, trimmed.
std::string normalize_term(std::string_view text);

/// ASCII case-fold + trim of surrounding whitespace. Used for exact-match style comparisons.
std::string fold_trim(std::string_view text);

bool contains_reserved(std::string_view s);

}  // namespace kgpf
