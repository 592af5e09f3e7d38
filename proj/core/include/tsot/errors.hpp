// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsot {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One broken transcript rule, anchored at the offending token.
struct Violation {
  std::size_t token_index = 0;
  std::string rule;
  std::string detail;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Malformed textual input. `line` is 1-based; 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The channel pool ran dry: more speakers were registered at once than
/// there are channels.
class ConcurrencyExceeded : public Error {
 public:
  ConcurrencyExceeded(std::size_t token_index, std::vector<std::string> speakers);
  std::size_t token_index() const noexcept { return token_index_; }
  const std::vector<std::string>& speakers() const noexcept { return speakers_; }

 private:
  std::size_t token_index_;
  std::vector<std::string> speakers_;
};

class ChannelOutOfRange : public Error {
 public:
  using Error::Error;
};

class ModeMismatch : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class InsufficientPool : public Error {
 public:
  using Error::Error;
};

}  // namespace tsot
