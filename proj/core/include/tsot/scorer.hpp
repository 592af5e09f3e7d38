// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsot/deserializer.hpp"

namespace tsot {

using TokenList = std::vector<std::string>;

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t ref_len = 0;

  std::size_t errors() const noexcept { return substitutions + insertions + deletions; }
  EditCounts& operator+=(const EditCounts& other) noexcept;
  friend EditCounts operator+(EditCounts a, const EditCounts& b) noexcept { return a += b; }
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

/// (S + I + D) / ref_len, or NaN when ref_len is 0.
double word_error_rate(const EditCounts& counts) noexcept;

struct ScoreOptions {
  bool lowercase = false;  // ASCII case folding before comparison
};

/// Unit-cost Levenshtein alignment. Among equally cheap alignments the
/// traceback prefers match/substitution, then insertion, then deletion.
EditCounts edit_distance(std::span<const std::string> ref, std::span<const std::string> hyp,
                         const ScoreOptions& options = {});

inline constexpr std::size_t kMaxStreams = 8;

struct WerReport {
  EditCounts counts;
  double wer = 0.0;
  /// assignment[h] is the reference matched to hypothesis h, or nullopt
  /// when h was paired with an empty placeholder.
  std::vector<std::optional<std::size_t>> assignment;
};

/// Minimum-error assignment of hypotheses to references over every
/// bijection, after padding the shorter side with empty streams. An
/// unmatched hypothesis scores as insertions, an unmatched reference as
/// deletions. Throws SizeLimitError above kMaxStreams on either side.
WerReport permutation_wer(std::span<const TokenList> refs, std::span<const TokenList> hyps,
                          const ScoreOptions& options = {});

/// Scores deserialized channels against per-speaker references. Empty
/// channels are dropped; references are taken in speaker-name order, so
/// assignment indices refer to that order. Throws Error if a channel token
/// appears on either side.
WerReport score_deserialized(const ChannelStreams& channels, const std::map<std::string, TokenList>& refs,
                             const ScoreOptions& options = {});

struct MacroAverage {
  std::vector<std::pair<std::string, double>> rows;
  double average = 0.0;
};

/// Unweighted mean of per-condition WERs. Throws Error on an empty list or
/// a condition with no reference words.
MacroAverage macro_average(std::span<const std::pair<std::string, WerReport>> reports);

}  // namespace tsot
