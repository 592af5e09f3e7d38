// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsot/errors.hpp"

namespace tsot {

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string msg = "invalid transcript:";
  for (const auto& v : violations) {
    msg += " [token " + std::to_string(v.token_index) + ": " + v.rule;
    if (!v.detail.empty()) msg += " (" + v.detail + ")";
    msg += "]";
  }
  return msg;
}

std::string describe(std::size_t token_index, const std::vector<std::string>& speakers) {
  std::string msg = "channel pool exhausted at token " + std::to_string(token_index) + "; registered speakers:";
  for (const auto& s : speakers) msg += " " + s;
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(describe(violations)), violations_(std::move(violations)) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

ConcurrencyExceeded::ConcurrencyExceeded(std::size_t token_index, std::vector<std::string> speakers)
    : Error(describe(token_index, speakers)), token_index_(token_index), speakers_(std::move(speakers)) {}

}  // namespace tsot
