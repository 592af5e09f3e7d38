// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsot/scorer.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>

namespace tsot {

EditCounts& EditCounts::operator+=(const EditCounts& other) noexcept {
  substitutions += other.substitutions;
  insertions += other.insertions;
  deletions += other.deletions;
  ref_len += other.ref_len;
  return *this;
}

double word_error_rate(const EditCounts& counts) noexcept {
  if (counts.ref_len == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(counts.errors()) / static_cast<double>(counts.ref_len);
}

namespace {

bool same(const std::string& a, const std::string& b, bool lowercase) {
  if (!lowercase) return a == b;
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

EditCounts edit_distance(std::span<const std::string> ref, std::span<const std::string> hyp,
                         const ScoreOptions& options) {
  const std::size_t n = ref.size(), m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<std::size_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * width + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (same(ref[i - 1], hyp[j - 1], options.lowercase) ? 0 : 1);
      at(i, j) = std::min({diag, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }

  EditCounts counts;
  counts.ref_len = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool match = same(ref[i - 1], hyp[j - 1], options.lowercase);
      if (at(i - 1, j - 1) + (match ? 0 : 1) == at(i, j)) {
        if (!match) ++counts.substitutions;
        --i, --j;
        continue;
      }
    }
    if (j > 0 && at(i, j - 1) + 1 == at(i, j)) {
      ++counts.insertions;
      --j;
    } else {
      ++counts.deletions;
      --i;
    }
  }
  return counts;
}

WerReport permutation_wer(std::span<const TokenList> refs, std::span<const TokenList> hyps,
                          const ScoreOptions& options) {
  if (refs.size() > kMaxStreams || hyps.size() > kMaxStreams) {
    throw SizeLimitError("permutation scoring supports at most " + std::to_string(kMaxStreams) +
                         " streams per side, got " + std::to_string(refs.size()) + " references and " +
                         std::to_string(hyps.size()) + " hypotheses");
  }
  const std::size_t k = std::max(refs.size(), hyps.size());
  static const TokenList kEmpty;
  auto ref_at = [&](std::size_t r) -> const TokenList& { return r < refs.size() ? refs[r] : kEmpty; };
  auto hyp_at = [&](std::size_t h) -> const TokenList& { return h < hyps.size() ? hyps[h] : kEmpty; };

  // pair[h][r]: cost of scoring hypothesis h against reference r.
  std::vector<std::vector<EditCounts>> pair(k, std::vector<EditCounts>(k));
  for (std::size_t h = 0; h < k; ++h) {
    for (std::size_t r = 0; r < k; ++r) pair[h][r] = edit_distance(ref_at(r), hyp_at(h), options);
  }

  std::vector<std::size_t> perm(k);  // perm[h] = r
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best = perm;
  std::size_t best_errors = std::numeric_limits<std::size_t>::max();
  do {
    std::size_t errors = 0;
    for (std::size_t h = 0; h < k; ++h) errors += pair[h][perm[h]].errors();
    if (errors < best_errors) {
      best_errors = errors;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  WerReport report;
  for (std::size_t h = 0; h < k; ++h) report.counts += pair[h][best[h]];
  for (std::size_t h = 0; h < hyps.size(); ++h) {
    report.assignment.push_back(best[h] < refs.size() ? std::optional<std::size_t>(best[h]) : std::nullopt);
  }
  report.wer = word_error_rate(report.counts);
  return report;
}

WerReport score_deserialized(const ChannelStreams& channels, const std::map<std::string, TokenList>& refs,
                             const ScoreOptions& options) {
  std::vector<TokenList> hyps;
  for (const auto& ch : channels.channels) {
    if (std::any_of(ch.begin(), ch.end(), [](const std::string& t) { return is_reserved_token(t); })) {
      throw Error("channel-change token found in a deserialized channel");
    }
    if (!ch.empty()) hyps.push_back(ch);
  }
  std::vector<TokenList> ref_list;
  ref_list.reserve(refs.size());
  for (const auto& [speaker, tokens] : refs) {
    if (std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) { return is_reserved_token(t); })) {
      throw Error("channel-change token found in reference for '" + speaker + "'");
    }
    ref_list.push_back(tokens);
  }
  return permutation_wer(ref_list, hyps, options);
}

MacroAverage macro_average(std::span<const std::pair<std::string, WerReport>> reports) {
  if (reports.empty()) throw Error("macro average of an empty report list");
  MacroAverage out;
  double sum = 0.0;
  for (const auto& [label, report] : reports) {
    if (report.counts.ref_len == 0) throw Error("condition '" + label + "' has no reference words");
    const double wer = word_error_rate(report.counts);
    out.rows.emplace_back(label, wer);
    sum += wer;
  }
  out.average = sum / static_cast<double>(reports.size());
  return out;
}

}  // namespace tsot
