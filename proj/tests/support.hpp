// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

// Builders, random generators and brute-force oracles shared by the unit
// and acceptance suites. Nothing here calls into the code paths it is
// used to check.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tsot/deserializer.hpp"
#include "tsot/scorer.hpp"
#include "tsot/transcript.hpp"

namespace tsot::testing {

inline TimedToken tok(std::string text, std::string speaker, std::int64_t ms, std::string utt, bool final = false) {
  return TimedToken{std::move(text), ms, std::move(speaker), std::move(utt), final};
}

inline AnnotatedTranscript transcript(std::vector<TimedToken> tokens, std::string id = "t") {
  return AnnotatedTranscript{std::move(id), std::move(tokens)};
}

// ---------------------------------------------------------------------------
// Random generators

struct GenOptions {
  int max_utterances = 5;
  int max_tokens = 5;
  std::int64_t start_span_ms = 3000;
  std::int64_t max_step_ms = 400;  // 0-length steps produce ties
  bool distinct_speakers = true;   // otherwise speakers come from a pool of 3
};

/// Utterance k is "u<k>", tokens are "u<k>w<j>" so every text is unique.
inline AnnotatedTranscript random_transcript(std::mt19937_64& g, const GenOptions& gen = {}) {
  std::uniform_int_distribution<int> n_utt(1, gen.max_utterances);
  std::uniform_int_distribution<int> n_tok(1, gen.max_tokens);
  std::uniform_int_distribution<std::int64_t> start(0, gen.start_span_ms);
  std::uniform_int_distribution<std::int64_t> step(0, gen.max_step_ms);
  std::uniform_int_distribution<int> spk(0, 2);

  AnnotatedTranscript t;
  t.sample_id = "rand";
  const int utts = n_utt(g);
  std::map<std::string, std::int64_t> speaker_free_at;  // keeps reused speakers from self-overlapping
  for (int u = 0; u < utts; ++u) {
    std::string speaker = gen.distinct_speakers ? "S" + std::to_string(u) : "S" + std::to_string(spk(g));
    std::int64_t time = start(g);
    if (!gen.distinct_speakers) time += speaker_free_at[speaker];
    const int n = n_tok(g);
    for (int j = 0; j < n; ++j) {
      time += step(g);
      t.tokens.push_back(tok("u" + std::to_string(u) + "w" + std::to_string(j), speaker, time,
                             "u" + std::to_string(u), j + 1 == n));
    }
    speaker_free_at[speaker] = time + 1;
  }
  return t;
}

/// Pool of single-utterance transcripts for the simulator. With
/// `unique_words` every token text is distinct, as channels_consistent needs.
inline std::vector<AnnotatedTranscript> random_pool(std::mt19937_64& g, std::size_t size, int max_words = 12,
                                                    bool unique_words = false) {
  static const std::vector<std::string> vocab{"the", "a",    "of",  "speech", "model", "token",
                                              "time", "ship", "sea", "north",  "light", "river"};
  std::uniform_int_distribution<int> n_words(1, max_words);
  std::uniform_int_distribution<std::int64_t> gap(80, 600);
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
  std::vector<AnnotatedTranscript> pool;
  for (std::size_t i = 0; i < size; ++i) {
    AnnotatedTranscript t;
    t.sample_id = "src" + std::to_string(i);
    const int n = n_words(g);
    std::int64_t time = 0;
    for (int j = 0; j < n; ++j) {
      time += gap(g);
      std::string text = vocab[word(g)];
      if (unique_words) text += "." + std::to_string(i) + "." + std::to_string(j);
      t.tokens.push_back(tok(std::move(text), "reader" + std::to_string(i % 37), time, "utt" + std::to_string(i), j + 1 == n));
    }
    pool.push_back(std::move(t));
  }
  return pool;
}

// ---------------------------------------------------------------------------
// Oracles

/// Stable emission-time order by insertion sort.
inline std::vector<TimedToken> sorted_by_time(const AnnotatedTranscript& t) {
  std::vector<TimedToken> out;
  for (const auto& x : t.tokens) {
    auto pos = out.end();
    while (pos != out.begin() && std::prev(pos)->emission_ms > x.emission_ms) --pos;
    out.insert(pos, x);
  }
  return out;
}

inline std::vector<std::string> sorted_texts(const AnnotatedTranscript& t) {
  std::vector<std::string> out;
  for (const auto& x : sorted_by_time(t)) out.push_back(x.token);
  return out;
}

/// Peak number of utterances whose [first, final] sorted-position window
/// covers a position, by direct scan of every position.
inline std::size_t brute_force_concurrency(const AnnotatedTranscript& t) {
  const auto sorted = sorted_by_time(t);
  std::set<std::string> utts;
  for (const auto& x : sorted) utts.insert(x.utterance_id);
  std::size_t best = 0;
  for (std::size_t p = 0; p < sorted.size(); ++p) {
    std::size_t active = 0;
    for (const auto& u : utts) {
      std::optional<std::size_t> first, last;
      for (std::size_t q = 0; q < sorted.size(); ++q) {
        if (sorted[q].utterance_id != u) continue;
        if (!first) first = q;
        if (sorted[q].utterance_final) last = q;
      }
      if (first && last && *first <= p && p <= *last) ++active;
    }
    best = std::max(best, active);
  }
  return best;
}

/// Exhaustive recursion over alignments of ref[0:i] and hyp[0:j]. Among
/// optimal choices the last aligned pair is taken as diagonal first, then
/// insertion, then deletion, which pins the S/I/D breakdown.
inline EditCounts naive_edit_distance(const std::vector<std::string>& ref, const std::vector<std::string>& hyp,
                                      std::size_t i, std::size_t j) {
  if (i == 0 && j == 0) return EditCounts{};
  std::optional<EditCounts> best;
  auto consider = [&](EditCounts c) {
    if (!best || c.errors() < best->errors()) best = c;
  };
  if (i > 0 && j > 0) {
    auto c = naive_edit_distance(ref, hyp, i - 1, j - 1);
    if (ref[i - 1] != hyp[j - 1]) ++c.substitutions;
    consider(c);
  }
  if (j > 0) {
    auto c = naive_edit_distance(ref, hyp, i, j - 1);
    ++c.insertions;
    consider(c);
  }
  if (i > 0) {
    auto c = naive_edit_distance(ref, hyp, i - 1, j);
    ++c.deletions;
    consider(c);
  }
  return *best;
}

inline EditCounts naive_edit_distance(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  auto c = naive_edit_distance(ref, hyp, ref.size(), hyp.size());
  c.ref_len = ref.size();
  return c;
}

struct BruteForceWer {
  EditCounts counts;
  std::vector<std::optional<std::size_t>> assignment;
};

/// Enumerates every bijection between padded hypothesis and reference
/// lists, in lexicographic order, scoring each pair with the naive recursion.
inline BruteForceWer brute_force_permutation_wer(const std::vector<TokenList>& refs,
                                                 const std::vector<TokenList>& hyps) {
  const std::size_t k = std::max(refs.size(), hyps.size());
  auto padded = [k](std::vector<TokenList> v) {
    v.resize(k);
    return v;
  };
  const auto R = padded(refs), H = padded(hyps);

  BruteForceWer best;
  std::size_t best_errors = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> chosen;
  std::vector<bool> used(k, false);

  auto recurse = [&](auto&& self) -> void {
    if (chosen.size() == k) {
      EditCounts total;
      for (std::size_t h = 0; h < k; ++h) total += naive_edit_distance(R[chosen[h]], H[h]);
      if (total.errors() < best_errors) {
        best_errors = total.errors();
        best.counts = total;
        best.assignment.clear();
        for (std::size_t h = 0; h < hyps.size(); ++h) {
          best.assignment.push_back(chosen[h] < refs.size() ? std::optional<std::size_t>(chosen[h]) : std::nullopt);
        }
      }
      return;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (used[r]) continue;
      used[r] = true;
      chosen.push_back(r);
      self(self);
      chosen.pop_back();
      used[r] = false;
    }
  };
  recurse(recurse);
  return best;
}

/// True when every utterance of `t` appears, contiguously and in order, on
/// exactly one channel. Requires unique token texts.
inline bool channels_consistent(const AnnotatedTranscript& t, const ChannelStreams& streams, std::string* why = nullptr) {
  std::map<std::string, std::vector<std::string>> by_utt;
  for (const auto& x : sorted_by_time(t)) by_utt[x.utterance_id].push_back(x.token);
  std::size_t placed = 0;
  for (const auto& [utt, words] : by_utt) {
    int found = 0;
    for (const auto& ch : streams.channels) {
      auto it = std::search(ch.begin(), ch.end(), words.begin(), words.end());
      if (it != ch.end()) ++found;
    }
    if (found != 1) {
      if (why) *why = "utterance " + utt + " found contiguously on " + std::to_string(found) + " channels";
      return false;
    }
    placed += words.size();
  }
  if (placed != streams.total_tokens()) {
    if (why) *why = "token count mismatch";
    return false;
  }
  return true;
}

}  // namespace tsot::testing
