// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsot/deserializer.hpp"

#include <numeric>

namespace tsot {

std::size_t ChannelStreams::total_tokens() const {
  return std::accumulate(channels.begin(), channels.end(), std::size_t{0},
                         [](std::size_t n, const auto& c) { return n + c.size(); });
}

DecoderState::DecoderState(int channels, SerialMode mode) : mode_(mode) {
  if (channels < 2) throw ConfigError("a decoder needs at least 2 channels, got " + std::to_string(channels));
  if (mode == SerialMode::kToggle && channels != 2) {
    throw ConfigError("toggle mode supports exactly 2 channels, got " + std::to_string(channels));
  }
  streams_.channels.resize(static_cast<std::size_t>(channels));
}

std::optional<Emission> DecoderState::step(const SerialToken& token) {
  if (const auto* lex = std::get_if<Lexical>(&token)) {
    streams_.channels[static_cast<std::size_t>(current_ - 1)].push_back(lex->text);
    ++consumed_;
    ++lexical_seen_;
    return Emission{current_, lex->text};
  }

  int next = current_;
  if (std::holds_alternative<ChannelToggle>(token)) {
    if (mode_ != SerialMode::kToggle) throw ModeMismatch("'<cc>' in an explicit-mode stream");
    next = current_ == 1 ? 2 : 1;
  } else {
    const int target = std::get<ChannelSelect>(token).channel;
    if (mode_ != SerialMode::kExplicit) throw ModeMismatch("'" + render(token) + "' in a toggle-mode stream");
    if (target < 1 || target > num_channels()) {
      throw ChannelOutOfRange("'" + render(token) + "' addresses channel " + std::to_string(target) + " of " +
                              std::to_string(num_channels()));
    }
    next = target;
  }
  if (lexical_seen_ == 0) {
    warnings_.push_back("channel token '" + render(token) + "' at position " + std::to_string(consumed_) +
                        " precedes the first word");
  }
  current_ = next;
  ++consumed_;
  return std::nullopt;
}

DecoderState new_decoder(int channels, SerialMode mode) { return DecoderState(channels, mode); }

std::pair<DecoderState, std::optional<Emission>> step(DecoderState state, const SerialToken& token) {
  auto emission = state.step(token);
  return {std::move(state), std::move(emission)};
}

ChannelStreams deserialize(const SerializedTranscript& serialized) {
  DecoderState state(serialized.max_channels, serialized.mode);
  for (const auto& token : serialized.tokens) state.step(token);
  return state.streams();
}

std::vector<std::string> strip_cc(const SerializedTranscript& serialized) {
  std::vector<std::string> out;
  out.reserve(serialized.tokens.size());
  for (const auto& token : serialized.tokens) {
    if (const auto* lex = std::get_if<Lexical>(&token)) out.push_back(lex->text);
  }
  return out;
}

}  // namespace tsot
