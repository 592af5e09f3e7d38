// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tsot/transcript.hpp"

namespace tsot {

struct Lexical {
  std::string text;
  friend bool operator==(const Lexical&, const Lexical&) = default;
};

/// "<cc>": flip between the two virtual channels.
struct ChannelToggle {
  friend bool operator==(const ChannelToggle&, const ChannelToggle&) = default;
};

/// "<ccN>": route subsequent tokens to channel N (1-based).
struct ChannelSelect {
  int channel = 1;
  friend bool operator==(const ChannelSelect&, const ChannelSelect&) = default;
};

using SerialToken = std::variant<Lexical, ChannelToggle, ChannelSelect>;

inline bool is_lexical(const SerialToken& t) { return std::holds_alternative<Lexical>(t); }

/// Wire form: lexical text, "<cc>" or "<ccN>".
std::string render(const SerialToken& token);

/// Inverse of render(). "<cc0>" and "<cc>"-like strings with non-digit
/// payloads are rejected with ParseError (line 0).
SerialToken parse_serial_token(std::string_view text);

enum class SerialMode { kToggle, kExplicit };

std::string_view to_string(SerialMode mode);
SerialMode parse_serial_mode(std::string_view text);

struct SerializedTranscript {
  std::string sample_id;
  int max_channels = 2;
  SerialMode mode = SerialMode::kToggle;
  std::vector<SerialToken> tokens;

  friend bool operator==(const SerializedTranscript&, const SerializedTranscript&) = default;
};

/// Two-channel serialization: tokens in stable emission order with a
/// "<cc>" between every pair of neighbours spoken by different speakers.
/// Throws ValidationError on invalid input.
SerializedTranscript serialize_two(const AnnotatedTranscript& transcript);

struct SerializeOptions {
  /// Reproduce the reference channel-allocation procedure verbatim: the
  /// first token never releases its channel and a speaker whose utterance
  /// just ended stays unregistered while it keeps talking.
  bool strict_literal = false;
};

/// M-channel serialization with explicit "<ccN>" tokens. Speakers hold a
/// channel from the first token of an utterance to its final token; free
/// channels are handed out lowest index first. Throws ConcurrencyExceeded
/// when more than `channels` speakers need a channel at once.
SerializedTranscript serialize_m(const AnnotatedTranscript& transcript, int channels,
                                 SerializeOptions options = {});

struct RoundTripOptions {
  SerialMode mode = SerialMode::kToggle;
  int channels = 2;
  bool strict_literal = false;
};

struct RoundTripReport {
  bool ok = true;
  std::size_t lexical_tokens = 0;
  /// Human-readable description of the first divergence, empty when ok.
  std::string divergence;
  /// Utterance at fault, when the divergence is attributable to one.
  std::optional<std::string> utterance_id;
};

/// Serializes, deserializes and checks that every utterance lands on a
/// single channel, in order, without another utterance interleaved into
/// it. ConcurrencyExceeded propagates.
RoundTripReport round_trip_check(const AnnotatedTranscript& transcript, const RoundTripOptions& options = {});

}  // namespace tsot
