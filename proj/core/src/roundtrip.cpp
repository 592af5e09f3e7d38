// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include <map>
#include <set>

#include "tsot/deserializer.hpp"
#include "tsot/serializer.hpp"

namespace tsot {

namespace {

RoundTripReport diverged(std::size_t lexical, std::string what, std::optional<std::string> utterance = std::nullopt) {
  return RoundTripReport{false, lexical, std::move(what), std::move(utterance)};
}

}  // namespace

RoundTripReport round_trip_check(const AnnotatedTranscript& transcript, const RoundTripOptions& options) {
  SerializedTranscript serialized;
  if (options.mode == SerialMode::kToggle) {
    if (options.channels != 2) throw ConfigError("toggle mode round trip needs exactly 2 channels");
    serialized = serialize_two(transcript);
  } else {
    serialized = serialize_m(transcript, options.channels, SerializeOptions{options.strict_literal});
  }

  const auto order = emission_order(transcript);
  DecoderState decoder(serialized.max_channels, serialized.mode);

  std::map<std::string, int> home;  // utterance -> channel it was first seen on
  std::map<int, std::string> occupant;  // channel -> utterance currently being written
  std::map<int, std::set<std::string>> closed;  // channel -> utterances that were interrupted or ended there
  std::size_t pos = 0;

  for (const auto& token : serialized.tokens) {
    auto emission = decoder.step(token);
    if (!emission) continue;
    if (pos >= order.size()) return diverged(pos, "stream carries more words than the transcript");
    const auto& expected = transcript.tokens[order[pos]];
    if (emission->token != expected.token) {
      return diverged(pos, "word " + std::to_string(pos) + " is '" + emission->token + "', expected '" +
                               expected.token + "'");
    }
    const auto& utt = expected.utterance_id;
    const int ch = emission->channel;
    auto [it, first] = home.try_emplace(utt, ch);
    if (!first && it->second != ch) {
      return diverged(pos,
                      "utterance '" + utt + "' split across channels " + std::to_string(it->second) + " and " +
                          std::to_string(ch) + " at word " + std::to_string(pos) + " ('" + expected.token + "')",
                      utt);
    }
    auto [occ, fresh] = occupant.try_emplace(ch, utt);
    if (!fresh && occ->second != utt) {
      if (closed[ch].contains(utt)) {
        return diverged(pos,
                        "utterance '" + utt + "' interleaved with '" + occ->second + "' on channel " +
                            std::to_string(ch) + " at word " + std::to_string(pos),
                        utt);
      }
      closed[ch].insert(occ->second);
      occ->second = utt;
    }
    ++pos;
  }
  if (pos != order.size()) {
    return diverged(pos, "stream carries " + std::to_string(pos) + " words, transcript has " +
                             std::to_string(order.size()));
  }
  return RoundTripReport{true, pos, {}, std::nullopt};
}

}  // namespace tsot
