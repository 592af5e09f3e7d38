// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tsot/serializer.hpp"

namespace tsot {

/// Virtual output channels; `channels[0]` is channel 1.
struct ChannelStreams {
  std::vector<std::vector<std::string>> channels;

  std::size_t total_tokens() const;
  friend bool operator==(const ChannelStreams&, const ChannelStreams&) = default;
};

/// A lexical token routed to a 1-based channel.
struct Emission {
  int channel = 1;
  std::string token;
  friend bool operator==(const Emission&, const Emission&) = default;
};

/// Streaming deserializer state. A plain value: copy it to fork a
/// session, never share one between threads while stepping.
class DecoderState {
 public:
  DecoderState(int channels, SerialMode mode);

  /// Consumes one serialized token. Lexical tokens are appended to the
  /// current channel and returned; channel tokens only move the cursor.
  std::optional<Emission> step(const SerialToken& token);

  int current_channel() const noexcept { return current_; }
  int num_channels() const noexcept { return static_cast<int>(streams_.channels.size()); }
  SerialMode mode() const noexcept { return mode_; }
  std::size_t tokens_consumed() const noexcept { return consumed_; }
  const ChannelStreams& streams() const noexcept { return streams_; }
  /// Non-fatal oddities seen so far, e.g. a channel token before any word.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  friend bool operator==(const DecoderState&, const DecoderState&) = default;

 private:
  SerialMode mode_;
  int current_ = 1;
  std::size_t consumed_ = 0;
  std::size_t lexical_seen_ = 0;
  ChannelStreams streams_;
  std::vector<std::string> warnings_;
};

/// Throws ConfigError unless channels >= 2, and exactly 2 in toggle mode.
DecoderState new_decoder(int channels, SerialMode mode);

/// Functional form of DecoderState::step.
std::pair<DecoderState, std::optional<Emission>> step(DecoderState state, const SerialToken& token);

ChannelStreams deserialize(const SerializedTranscript& serialized);

/// Lexical tokens in stream order with every channel token dropped.
std::vector<std::string> strip_cc(const SerializedTranscript& serialized);

}  // namespace tsot
