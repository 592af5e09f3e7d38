// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsot/transcript.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace tsot {

bool is_reserved_token(std::string_view text) {
  if (text.size() < 4 || !text.starts_with("<cc") || !text.ends_with(">")) return false;
  auto digits = text.substr(3, text.size() - 4);
  return std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
}

namespace {

struct UtteranceTrack {
  std::string speaker;
  std::int64_t last_time = 0;
  std::size_t last_index = 0;
  bool final_seen = false;
};

void add(std::vector<Violation>& out, std::size_t index, std::string_view rule, std::string detail) {
  out.push_back(Violation{index, std::string(rule), std::move(detail)});
}

}  // namespace

ValidationResult validate_transcript(const AnnotatedTranscript& transcript) {
  ValidationResult result;
  auto& out = result.violations;
  std::unordered_map<std::string, UtteranceTrack> utterances;
  std::vector<std::string> order;  // first-appearance order, for stable reporting

  for (std::size_t i = 0; i < transcript.tokens.size(); ++i) {
    const auto& tok = transcript.tokens[i];
    if (tok.token.empty()) add(out, i, kRuleEmptyToken, "token text is empty");
    if (is_reserved_token(tok.token)) add(out, i, kRuleReservedToken, "'" + tok.token + "' is a channel-change token");
    if (tok.emission_ms < 0) add(out, i, kRuleNegativeTime, std::to_string(tok.emission_ms) + " ms");
    if (tok.speaker.empty()) add(out, i, kRuleEmptySpeaker, "speaker id is empty");

    auto [it, inserted] = utterances.try_emplace(tok.utterance_id);
    auto& track = it->second;
    if (inserted) {
      track.speaker = tok.speaker;
      order.push_back(tok.utterance_id);
    } else {
      if (track.speaker != tok.speaker) {
        add(out, i, kRuleSharedUtterance,
            "utterance '" + tok.utterance_id + "' belongs to '" + track.speaker + "', not '" + tok.speaker + "'");
        continue;
      }
      if (track.final_seen) {
        add(out, i, kRuleTokenAfterFinal, "utterance '" + tok.utterance_id + "' already ended");
      }
      if (tok.emission_ms < track.last_time) {
        add(out, i, kRuleNonMonotone,
            std::to_string(tok.emission_ms) + " ms after " + std::to_string(track.last_time) + " ms");
      }
    }
    track.last_time = std::max(track.last_time, tok.emission_ms);
    track.last_index = i;
    track.final_seen = track.final_seen || tok.utterance_final;
  }

  for (const auto& id : order) {
    const auto& track = utterances.at(id);
    if (!track.final_seen) add(out, track.last_index, kRuleMissingFinal, "utterance '" + id + "'");
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Violation& a, const Violation& b) { return a.token_index < b.token_index; });
  return result;
}

void require_valid(const AnnotatedTranscript& transcript) {
  auto result = validate_transcript(transcript);
  if (!result.ok()) throw ValidationError(std::move(result.violations));
}

std::vector<std::size_t> emission_order(const AnnotatedTranscript& transcript) {
  std::vector<std::size_t> order(transcript.tokens.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return transcript.tokens[a].emission_ms < transcript.tokens[b].emission_ms;
  });
  return order;
}

ConcurrencyProfile max_concurrency(const AnnotatedTranscript& transcript) {
  require_valid(transcript);
  const auto order = emission_order(transcript);

  // Active span per utterance, in sorted positions.
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> span;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& tok = transcript.tokens[order[pos]];
    auto [it, inserted] = span.try_emplace(tok.utterance_id, pos, pos);
    if (tok.utterance_final) it->second.second = pos;
  }

  // Sweep: open at first position, close after final position.
  std::vector<std::vector<std::string>> opens(order.size()), closes(order.size());
  for (const auto& [id, range] : span) {
    opens[range.first].push_back(id);
    closes[range.second].push_back(id);
  }

  ConcurrencyProfile profile;
  profile.per_token_active.reserve(order.size());
  std::set<std::string> active;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    active.insert(opens[pos].begin(), opens[pos].end());
    profile.per_token_active.push_back(
        ActiveSet{pos, order[pos], std::vector<std::string>(active.begin(), active.end())});
    profile.max_concurrent = std::max(profile.max_concurrent, active.size());
    for (const auto& id : closes[pos]) active.erase(id);
  }
  return profile;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

double parse_seconds(std::string_view field, std::size_t line, const char* name) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value) || value < 0.0) {
    throw ParseError(line, std::string("bad ") + name + " '" + std::string(field) + "'");
  }
  return value;
}

struct CtmRecord {
  std::size_t line = 0;
  std::string speaker;
  std::string word;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::optional<std::string> utterance_id;
};

AnnotatedTranscript segment(std::string sample_id, const std::vector<CtmRecord>& records,
                            std::int64_t silence_gap_ms) {
  AnnotatedTranscript out;
  out.sample_id = std::move(sample_id);
  out.tokens.reserve(records.size());

  struct SpeakerState {
    std::int64_t last_end = 0;
    std::size_t last_token = 0;
    int counter = 0;
    bool open = false;
  };
  std::unordered_map<std::string, SpeakerState> speakers;

  for (const auto& rec : records) {
    auto& st = speakers[rec.speaker];
    std::string utt;
    if (rec.utterance_id) {
      utt = *rec.utterance_id;
      if (st.open && out.tokens[st.last_token].utterance_id != utt) {
        out.tokens[st.last_token].utterance_final = true;
      }
    } else {
      bool split = !st.open || rec.start_ms - st.last_end > silence_gap_ms;
      if (split) {
        if (st.open) out.tokens[st.last_token].utterance_final = true;
        ++st.counter;
        utt = rec.speaker + "-" + std::to_string(st.counter);
      } else {
        utt = out.tokens[st.last_token].utterance_id;
      }
    }
    out.tokens.push_back(TimedToken{rec.word, rec.end_ms, rec.speaker, utt, false});
    st.last_end = rec.end_ms;
    st.last_token = out.tokens.size() - 1;
    st.open = true;
  }
  for (const auto& [_, st] : speakers) {
    if (st.open) out.tokens[st.last_token].utterance_final = true;
  }
  return out;
}

}  // namespace

std::vector<AnnotatedTranscript> import_ctm_corpus(std::istream& in, const CtmOptions& options) {
  std::vector<std::string> file_order;
  std::unordered_map<std::string, std::vector<CtmRecord>> by_file;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty() || fields.front().starts_with(";;")) continue;
    if (fields.size() < 5 || fields.size() > 6) {
      throw ParseError(line_no, "expected 5 or 6 fields, got " + std::to_string(fields.size()));
    }
    const double start = parse_seconds(fields[2], line_no, "start time");
    const double dur = parse_seconds(fields[3], line_no, "duration");

    CtmRecord rec;
    rec.line = line_no;
    std::string label(fields[0]);
    auto mapped = options.channel_to_speaker.find(label);
    rec.speaker = mapped != options.channel_to_speaker.end() ? mapped->second : label;
    rec.word = std::string(fields[4]);
    rec.start_ms = std::llround(start * 1000.0);
    rec.end_ms = std::llround((start + dur) * 1000.0);
    if (fields.size() == 6) rec.utterance_id = std::string(fields[5]);

    std::string file(fields[1]);
    auto [it, inserted] = by_file.try_emplace(file);
    if (inserted) file_order.push_back(file);
    it->second.push_back(std::move(rec));
  }

  std::vector<AnnotatedTranscript> out;
  out.reserve(file_order.size());
  for (const auto& file : file_order) {
    auto& records = by_file[file];
    // Records of one speaker are segmented in time order even if the file interleaves them.
    std::stable_sort(records.begin(), records.end(),
                     [](const CtmRecord& a, const CtmRecord& b) { return a.start_ms < b.start_ms; });
    out.push_back(segment(file, records, options.silence_gap_ms));
  }
  return out;
}

AnnotatedTranscript import_ctm(std::istream& in, const CtmOptions& options) {
  auto corpus = import_ctm_corpus(in, options);
  if (corpus.empty()) return {};
  if (corpus.size() > 1) {
    throw ParseError(0, "records span " + std::to_string(corpus.size()) + " file ids; use import_ctm_corpus");
  }
  return std::move(corpus.front());
}

AnnotatedTranscript expand_subwords(const AnnotatedTranscript& transcript, const Lexicon& lexicon,
                                    bool permissive) {
  AnnotatedTranscript out;
  out.sample_id = transcript.sample_id;
  out.tokens.reserve(transcript.tokens.size());
  for (const auto& word : transcript.tokens) {
    auto it = lexicon.find(word.token);
    if (it == lexicon.end()) {
      if (!permissive) throw LookupError("no lexicon entry for '" + word.token + "'");
      out.tokens.push_back(word);
      continue;
    }
    if (it->second.empty()) throw LookupError("lexicon entry for '" + word.token + "' is empty");
    for (std::size_t k = 0; k < it->second.size(); ++k) {
      TimedToken sub = word;
      sub.token = it->second[k];
      sub.utterance_final = word.utterance_final && k + 1 == it->second.size();
      out.tokens.push_back(std::move(sub));
    }
  }
  return out;
}

}  // namespace tsot
