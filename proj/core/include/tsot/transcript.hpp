// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tsot/errors.hpp"

namespace tsot {

/// One recognition token: text, emission (end) time, speaker and the
/// utterance it belongs to.
struct TimedToken {
  std::string token;
  std::int64_t emission_ms = 0;
  std::string speaker;
  std::string utterance_id;
  bool utterance_final = false;

  friend bool operator==(const TimedToken&, const TimedToken&) = default;
};

struct AnnotatedTranscript {
  std::string sample_id;
  std::vector<TimedToken> tokens;

  friend bool operator==(const AnnotatedTranscript&, const AnnotatedTranscript&) = default;
};

/// True for "<cc>" and "<ccN>" with N a decimal digit string.
bool is_reserved_token(std::string_view text);

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// Rule names reported in Violation::rule.
inline constexpr std::string_view kRuleEmptyToken = "empty token";
inline constexpr std::string_view kRuleReservedToken = "reserved token";
inline constexpr std::string_view kRuleNegativeTime = "negative emission time";
inline constexpr std::string_view kRuleEmptySpeaker = "empty speaker";
inline constexpr std::string_view kRuleNonMonotone = "non-monotone utterance times";
inline constexpr std::string_view kRuleMissingFinal = "utterance lacks final token";
inline constexpr std::string_view kRuleTokenAfterFinal = "token after utterance-final token";
inline constexpr std::string_view kRuleSharedUtterance = "utterance id reused by another speaker";

ValidationResult validate_transcript(const AnnotatedTranscript& transcript);

/// Throws ValidationError carrying every violation when `transcript` is invalid.
void require_valid(const AnnotatedTranscript& transcript);

/// Token indices in ascending emission time; ties keep input order.
std::vector<std::size_t> emission_order(const AnnotatedTranscript& transcript);

struct ActiveSet {
  std::size_t position = 0;     // position in emission order
  std::size_t token_index = 0;  // index into AnnotatedTranscript::tokens
  std::vector<std::string> utterances;  // sorted utterance ids
};

struct ConcurrencyProfile {
  std::size_t max_concurrent = 0;
  std::vector<ActiveSet> per_token_active;
};

/// An utterance counts as active from its first to its final position in
/// emission order, inclusive.
ConcurrencyProfile max_concurrency(const AnnotatedTranscript& transcript);

struct CtmOptions {
  std::map<std::string, std::string> channel_to_speaker;  // unmapped labels are used verbatim
  std::int64_t silence_gap_ms = 500;
};

/// Parses CTM records "label file_id start_sec dur_sec word [utterance_id]",
/// grouped into one transcript per file id in order of first appearance.
/// Lines starting with ";;" and blank lines are skipped. Utterances are
/// split when a speaker is silent for more than `silence_gap_ms`, unless
/// the record carries an explicit utterance id.
std::vector<AnnotatedTranscript> import_ctm_corpus(std::istream& in, const CtmOptions& options = {});

/// Single-file variant; throws ParseError when records name more than one file id.
AnnotatedTranscript import_ctm(std::istream& in, const CtmOptions& options = {});

using Lexicon = std::map<std::string, std::vector<std::string>, std::less<>>;

/// Replaces every word with its subwords. All subwords share the word's
/// emission time; the final flag moves to the last subword. In permissive
/// mode words missing from the lexicon map to themselves.
AnnotatedTranscript expand_subwords(const AnnotatedTranscript& transcript, const Lexicon& lexicon,
                                    bool permissive = false);

}  // namespace tsot
