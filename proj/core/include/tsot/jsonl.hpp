// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

// Line formats. Every writer returns one compact JSON object without a
// trailing newline; every reader throws ParseError carrying `line`.

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "tsot/deserializer.hpp"
#include "tsot/mixture.hpp"
#include "tsot/scorer.hpp"
#include "tsot/serializer.hpp"
#include "tsot/transcript.hpp"

namespace tsot::jsonl {

// {"sample_id": str, "tokens": [{"token", "time_ms", "speaker", "utt", "final"}, ...]}
std::string write_transcript(const AnnotatedTranscript& transcript);
AnnotatedTranscript read_transcript(std::string_view line, std::size_t line_no = 0);

/// Accepts a transcript object or a mixture sample, whose "transcript"
/// member is read instead.
AnnotatedTranscript read_transcript_record(std::string_view line, std::size_t line_no = 0);

// {"sample_id": str, "mode": "toggle"|"explicit", "max_channels": int, "tokens": [str, ...]}
std::string write_serialized(const SerializedTranscript& serialized);
SerializedTranscript read_serialized(std::string_view line, std::size_t line_no = 0);

// {"sample_id": str, "channels": [[str, ...], ...]}
std::string write_channels(std::string_view sample_id, const ChannelStreams& streams);
std::pair<std::string, ChannelStreams> read_channels(std::string_view line, std::size_t line_no = 0);

// {"sample_id", "transcript": {...}, "references": {spk: [str]}, "provenance": {"sources": [...]}}
std::string write_mixture(const MixtureSample& sample);

struct ReferenceRecord {
  std::string sample_id;
  std::map<std::string, TokenList> references;
};

/// Reads {"sample_id", "references": {...}}; mixture samples qualify.
ReferenceRecord read_references(std::string_view line, std::size_t line_no = 0);

}  // namespace tsot::jsonl
