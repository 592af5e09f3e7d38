// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsot/rng.hpp"
#include "tsot/transcript.hpp"

namespace tsot {

enum class SpeakerCountLaw {
  kTwoWayP,       // S = 1 with probability p%, else S = 2
  kUniformOneToK  // S uniform on {1, ..., max_speakers}
};

struct MixtureConfig {
  double single_speaker_prob_p = 50.0;
  int max_speakers = 2;
  SpeakerCountLaw speaker_count_law = SpeakerCountLaw::kTwoWayP;
  std::vector<double> speed_ratios{1.0};
  std::optional<std::size_t> max_concurrency_cap;
  std::uint64_t rng_seed = 0;
};

/// Throws ConfigError on out-of-range fields.
void check_config(const MixtureConfig& config);

/// Where one utterance of a mixture came from and how it was placed.
struct SourceProvenance {
  std::string source_sample_id;
  std::string source_utterance_id;
  std::string speaker;         // label inside the mixture, spk1..spkS
  double speed_ratio = 1.0;
  std::int64_t delay_ms = 0;
  std::int64_t mixture_len_ms = 0;  // length of the mixture when the delay was drawn
};

struct MixtureSample {
  AnnotatedTranscript transcript;
  std::map<std::string, std::vector<std::string>> references;
  std::vector<SourceProvenance> provenance;
};

/// Retry budget for the concurrency cap: delays are redrawn this many
/// times before the utterances themselves are redrawn.
inline constexpr int kDelayRetries = 100;
inline constexpr int kUtteranceRedraws = 1000;

/// Emission times divided by `ratio` and rounded to the nearest
/// millisecond, so ratio > 1 means faster speech.
AnnotatedTranscript speed_perturb(const AnnotatedTranscript& transcript, double ratio);

/// Draws one mixture. Pool entries must each hold exactly one utterance
/// from one speaker. Utterance k >= 2 is delayed by Uniform(0, L) ms where
/// L is the last emission time of the mixture built so far. Tokens are
/// concatenated utterance by utterance, not time sorted.
MixtureSample sample_mixture(std::span<const AnnotatedTranscript> pool, const MixtureConfig& config, Rng& rng);

/// Sample `index` of a dataset, drawn from Rng(derive_seed(config.rng_seed, index)).
/// Named "sim-<index>".
MixtureSample generate_sample(std::span<const AnnotatedTranscript> pool, const MixtureConfig& config,
                              std::size_t index);

/// Calls `sink` with samples 0..n-1 in order.
void generate_dataset(std::span<const AnnotatedTranscript> pool, const MixtureConfig& config, std::size_t n,
                      const std::function<void(MixtureSample&&)>& sink);

std::vector<MixtureSample> generate_dataset(std::span<const AnnotatedTranscript> pool, const MixtureConfig& config,
                                            std::size_t n);

}  // namespace tsot
