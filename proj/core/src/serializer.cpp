// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsot/serializer.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

namespace tsot {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string render(const SerialToken& token) {
  return std::visit(Overloaded{
                        [](const Lexical& t) { return t.text; },
                        [](const ChannelToggle&) { return std::string("<cc>"); },
                        [](const ChannelSelect& t) { return "<cc" + std::to_string(t.channel) + ">"; },
                    },
                    token);
}

SerialToken parse_serial_token(std::string_view text) {
  if (!is_reserved_token(text)) return Lexical{std::string(text)};
  if (text == "<cc>") return ChannelToggle{};
  auto digits = text.substr(3, text.size() - 4);
  int channel = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), channel);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || channel < 1 || digits.front() == '0') {
    throw ParseError(0, "malformed channel token '" + std::string(text) + "'");
  }
  return ChannelSelect{channel};
}

std::string_view to_string(SerialMode mode) { return mode == SerialMode::kToggle ? "toggle" : "explicit"; }

SerialMode parse_serial_mode(std::string_view text) {
  if (text == "toggle") return SerialMode::kToggle;
  if (text == "explicit") return SerialMode::kExplicit;
  throw ConfigError("unknown serialization mode '" + std::string(text) + "'");
}

SerializedTranscript serialize_two(const AnnotatedTranscript& transcript) {
  require_valid(transcript);
  SerializedTranscript out{transcript.sample_id, 2, SerialMode::kToggle, {}};
  const auto order = emission_order(transcript);
  out.tokens.reserve(order.size() * 2);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& tok = transcript.tokens[order[pos]];
    if (pos > 0 && tok.speaker != transcript.tokens[order[pos - 1]].speaker) out.tokens.emplace_back(ChannelToggle{});
    out.tokens.emplace_back(Lexical{tok.token});
  }
  return out;
}

SerializedTranscript serialize_m(const AnnotatedTranscript& transcript, int channels, SerializeOptions options) {
  if (channels < 2) throw ConfigError("explicit serialization needs at least 2 channels, got " + std::to_string(channels));
  require_valid(transcript);
  SerializedTranscript out{transcript.sample_id, channels, SerialMode::kExplicit, {}};
  const auto order = emission_order(transcript);
  if (order.empty()) return out;
  out.tokens.reserve(order.size() * 2);

  std::map<std::string, int> registry;  // speaker -> channel currently held
  std::set<int> free_channels;
  for (int c = 2; c <= channels; ++c) free_channels.insert(c);
  int last_released = 0;

  auto release = [&](const std::string& speaker) {
    auto it = registry.find(speaker);
    // The literal procedure may try to release a speaker it already dropped.
    if (it == registry.end()) return;
    free_channels.insert(it->second);
    last_released = it->second;
    registry.erase(it);
  };

  const auto& first = transcript.tokens[order.front()];
  out.tokens.emplace_back(Lexical{first.token});
  registry[first.speaker] = 1;
  if (first.utterance_final && !options.strict_literal) release(first.speaker);

  for (std::size_t pos = 1; pos < order.size(); ++pos) {
    const auto& tok = transcript.tokens[order[pos]];
    const auto& prev = transcript.tokens[order[pos - 1]];
    if (tok.speaker != prev.speaker) {
      int channel = 0;
      if (auto it = registry.find(tok.speaker); it != registry.end()) {
        channel = it->second;
      } else {
        if (free_channels.empty()) {
          std::vector<std::pair<int, std::string>> held;
          for (const auto& [speaker, ch] : registry) held.emplace_back(ch, speaker);
          std::sort(held.begin(), held.end());
          std::vector<std::string> speakers;
          for (auto& [ch, speaker] : held) speakers.push_back(std::move(speaker));
          speakers.push_back(tok.speaker);
          throw ConcurrencyExceeded(order[pos], std::move(speakers));
        }
        channel = *free_channels.begin();
        free_channels.erase(free_channels.begin());
        registry[tok.speaker] = channel;
      }
      out.tokens.emplace_back(ChannelSelect{channel});
    } else if (!options.strict_literal && !registry.contains(tok.speaker)) {
      // Same speaker right after its own utterance ended: the decoder is
      // still on the channel just released, so take it back silently.
      free_channels.erase(last_released);
      registry[tok.speaker] = last_released;
    }
    out.tokens.emplace_back(Lexical{tok.token});
    if (tok.utterance_final) release(tok.speaker);
  }
  return out;
}

}  // namespace tsot
