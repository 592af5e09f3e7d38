// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsot/jsonl.hpp"

#include <nlohmann/json.hpp>

namespace tsot::jsonl {

using Json = nlohmann::ordered_json;

namespace {

Json parse(std::string_view line, std::size_t line_no) {
  try {
    Json j = Json::parse(line);
    if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
  }
}

const Json& field(const Json& obj, const char* name, std::size_t line_no) {
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(line_no, std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const Json& obj, const char* name, std::size_t line_no) {
  const auto& v = field(obj, name, line_no);
  if (!v.is_string()) throw ParseError(line_no, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

TokenList string_array(const Json& v, const char* what, std::size_t line_no) {
  if (!v.is_array()) throw ParseError(line_no, std::string(what) + " must be an array of strings");
  TokenList out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_string()) throw ParseError(line_no, std::string(what) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Json transcript_json(const AnnotatedTranscript& t) {
  Json tokens = Json::array();
  for (const auto& tok : t.tokens) {
    tokens.push_back(Json{{"token", tok.token},
                          {"time_ms", tok.emission_ms},
                          {"speaker", tok.speaker},
                          {"utt", tok.utterance_id},
                          {"final", tok.utterance_final}});
  }
  return Json{{"sample_id", t.sample_id}, {"tokens", std::move(tokens)}};
}

AnnotatedTranscript transcript_from(const Json& j, std::size_t line_no) {
  AnnotatedTranscript t;
  t.sample_id = string_field(j, "sample_id", line_no);
  const auto& tokens = field(j, "tokens", line_no);
  if (!tokens.is_array()) throw ParseError(line_no, "field 'tokens' must be an array");
  t.tokens.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (!tok.is_object()) throw ParseError(line_no, "token entries must be objects");
    const auto& time = field(tok, "time_ms", line_no);
    if (!time.is_number_integer()) throw ParseError(line_no, "field 'time_ms' must be an integer");
    const auto& final_flag = field(tok, "final", line_no);
    if (!final_flag.is_boolean()) throw ParseError(line_no, "field 'final' must be a boolean");
    t.tokens.push_back(TimedToken{string_field(tok, "token", line_no), time.get<std::int64_t>(),
                                  string_field(tok, "speaker", line_no), string_field(tok, "utt", line_no),
                                  final_flag.get<bool>()});
  }
  return t;
}

}  // namespace

std::string write_transcript(const AnnotatedTranscript& transcript) { return transcript_json(transcript).dump(); }

AnnotatedTranscript read_transcript(std::string_view line, std::size_t line_no) {
  return transcript_from(parse(line, line_no), line_no);
}

AnnotatedTranscript read_transcript_record(std::string_view line, std::size_t line_no) {
  Json j = parse(line, line_no);
  if (auto it = j.find("transcript"); it != j.end()) {
    if (!it->is_object()) throw ParseError(line_no, "field 'transcript' must be an object");
    return transcript_from(*it, line_no);
  }
  return transcript_from(j, line_no);
}

std::string write_serialized(const SerializedTranscript& serialized) {
  Json tokens = Json::array();
  for (const auto& tok : serialized.tokens) tokens.push_back(render(tok));
  return Json{{"sample_id", serialized.sample_id},
              {"mode", std::string(to_string(serialized.mode))},
              {"max_channels", serialized.max_channels},
              {"tokens", std::move(tokens)}}
      .dump();
}

SerializedTranscript read_serialized(std::string_view line, std::size_t line_no) {
  Json j = parse(line, line_no);
  SerializedTranscript s;
  s.sample_id = string_field(j, "sample_id", line_no);
  try {
    s.mode = parse_serial_mode(string_field(j, "mode", line_no));
  } catch (const ConfigError& e) {
    throw ParseError(line_no, e.what());
  }
  const auto& channels = field(j, "max_channels", line_no);
  if (!channels.is_number_integer()) throw ParseError(line_no, "field 'max_channels' must be an integer");
  s.max_channels = channels.get<int>();
  for (const auto& text : string_array(field(j, "tokens", line_no), "field 'tokens'", line_no)) {
    try {
      s.tokens.push_back(parse_serial_token(text));
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return s;
}

std::string write_channels(std::string_view sample_id, const ChannelStreams& streams) {
  Json channels = Json::array();
  for (const auto& ch : streams.channels) channels.push_back(ch);
  return Json{{"sample_id", std::string(sample_id)}, {"channels", std::move(channels)}}.dump();
}

std::pair<std::string, ChannelStreams> read_channels(std::string_view line, std::size_t line_no) {
  Json j = parse(line, line_no);
  ChannelStreams streams;
  const auto& channels = field(j, "channels", line_no);
  if (!channels.is_array()) throw ParseError(line_no, "field 'channels' must be an array");
  for (const auto& ch : channels) streams.channels.push_back(string_array(ch, "a channel", line_no));
  return {string_field(j, "sample_id", line_no), std::move(streams)};
}

std::string write_mixture(const MixtureSample& sample) {
  Json references = Json::object();
  for (const auto& [speaker, tokens] : sample.references) references[speaker] = tokens;
  Json sources = Json::array();
  for (const auto& p : sample.provenance) {
    sources.push_back(Json{{"sample_id", p.source_sample_id},
                           {"utterance_id", p.source_utterance_id},
                           {"speaker", p.speaker},
                           {"speed", p.speed_ratio},
                           {"delay_ms", p.delay_ms},
                           {"mixture_len_ms", p.mixture_len_ms}});
  }
  return Json{{"sample_id", sample.transcript.sample_id},
              {"transcript", transcript_json(sample.transcript)},
              {"references", std::move(references)},
              {"provenance", Json{{"sources", std::move(sources)}}}}
      .dump();
}

ReferenceRecord read_references(std::string_view line, std::size_t line_no) {
  Json j = parse(line, line_no);
  ReferenceRecord rec;
  rec.sample_id = string_field(j, "sample_id", line_no);
  const auto& refs = field(j, "references", line_no);
  if (!refs.is_object()) throw ParseError(line_no, "field 'references' must be an object");
  for (const auto& [speaker, tokens] : refs.items()) {
    rec.references[speaker] = string_array(tokens, "a reference", line_no);
  }
  return rec;
}

}  // namespace tsot::jsonl
