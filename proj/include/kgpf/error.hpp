// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgpf {

/// Base of every error the library throws. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

class LoadError : public DataError {
 public:
  using DataError::DataError;
};

class LookupError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

/// Path-grammar violation; `offset` is a byte offset into the parsed string.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t offset) : DataError(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A well-formed path names a concept the graph does not contain.
class ResolutionError : public DataError {
 public:
  using DataError::DataError;
};

/// Internal invariant violated (exit code 3).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace kgpf
