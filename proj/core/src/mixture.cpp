// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsot/mixture.hpp"

#include <algorithm>
#include <cmath>

namespace tsot {

void check_config(const MixtureConfig& config) {
  if (!(config.single_speaker_prob_p >= 0.0 && config.single_speaker_prob_p <= 100.0)) {
    throw ConfigError("p must lie in [0, 100], got " + std::to_string(config.single_speaker_prob_p));
  }
  if (config.max_speakers < 1) throw ConfigError("max_speakers must be at least 1");
  if (config.speed_ratios.empty()) throw ConfigError("speed_ratios must not be empty");
  for (double r : config.speed_ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("speed ratios must be positive, got " + std::to_string(r));
  }
  if (config.max_concurrency_cap && *config.max_concurrency_cap < 1) {
    throw ConfigError("max_concurrency_cap must be at least 1");
  }
}

AnnotatedTranscript speed_perturb(const AnnotatedTranscript& transcript, double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw ConfigError("speed ratio must be positive");
  AnnotatedTranscript out = transcript;
  for (auto& tok : out.tokens) tok.emission_ms = std::llround(static_cast<double>(tok.emission_ms) / ratio);
  return out;
}

namespace {

int draw_speaker_count(const MixtureConfig& config, Rng& rng) {
  if (config.speaker_count_law == SpeakerCountLaw::kTwoWayP) {
    return rng.uniform01() * 100.0 < config.single_speaker_prob_p ? 1 : 2;
  }
  return 1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(config.max_speakers)));
}

void check_pool_entry(const AnnotatedTranscript& entry) {
  if (entry.tokens.empty()) throw ConfigError("pool entry '" + entry.sample_id + "' has no tokens");
  require_valid(entry);
  const auto& head = entry.tokens.front();
  for (const auto& tok : entry.tokens) {
    if (tok.speaker != head.speaker || tok.utterance_id != head.utterance_id) {
      throw ConfigError("pool entry '" + entry.sample_id + "' is not a single-utterance transcript");
    }
  }
}

std::int64_t last_emission(const std::vector<TimedToken>& tokens) {
  std::int64_t last = 0;
  for (const auto& t : tokens) last = std::max(last, t.emission_ms);
  return last;
}

struct Source {
  const AnnotatedTranscript* entry;
  double ratio;
  AnnotatedTranscript perturbed;
};

MixtureSample place(const std::vector<Source>& sources, Rng& rng) {
  MixtureSample sample;
  auto& tokens = sample.transcript.tokens;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const auto& src = sources[k];
    const std::string speaker = "spk" + std::to_string(k + 1);
    const std::string utterance = "u" + std::to_string(k + 1);
    const std::int64_t len = last_emission(tokens);
    const std::int64_t delay = k == 0 ? 0 : std::llround(rng.uniform01() * static_cast<double>(len));

    auto& ref = sample.references[speaker];
    for (const auto& tok : src.perturbed.tokens) {
      tokens.push_back(TimedToken{tok.token, tok.emission_ms + delay, speaker, utterance, tok.utterance_final});
      ref.push_back(tok.token);
    }
    sample.provenance.push_back(SourceProvenance{src.entry->sample_id, src.entry->tokens.front().utterance_id,
                                                 speaker, src.ratio, delay, k == 0 ? 0 : len});
  }
  return sample;
}

}  // namespace

MixtureSample sample_mixture(std::span<const AnnotatedTranscript> pool, const MixtureConfig& config, Rng& rng) {
  check_config(config);
  if (pool.empty()) throw InsufficientPool("utterance pool is empty");
  const int speakers = draw_speaker_count(config, rng);
  if (static_cast<std::size_t>(speakers) > pool.size()) {
    throw InsufficientPool("need " + std::to_string(speakers) + " distinct utterances, pool has " +
                           std::to_string(pool.size()));
  }

  for (int redraw = 0; redraw < kUtteranceRedraws; ++redraw) {
    std::vector<std::size_t> picked;
    while (picked.size() < static_cast<std::size_t>(speakers)) {
      const std::size_t idx = rng.uniform_index(pool.size());
      if (std::find(picked.begin(), picked.end(), idx) == picked.end()) picked.push_back(idx);
    }
    std::vector<Source> sources;
    sources.reserve(picked.size());
    for (std::size_t idx : picked) {
      const auto& entry = pool[idx];
      check_pool_entry(entry);
      const double ratio = config.speed_ratios[rng.uniform_index(config.speed_ratios.size())];
      sources.push_back(Source{&entry, ratio, speed_perturb(entry, ratio)});
    }

    const int attempts = config.max_concurrency_cap ? kDelayRetries : 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      auto sample = place(sources, rng);
      if (!config.max_concurrency_cap ||
          max_concurrency(sample.transcript).max_concurrent <= *config.max_concurrency_cap) {
        return sample;
      }
    }
  }
  throw Error("could not place " + std::to_string(speakers) + " utterances within concurrency cap " +
              std::to_string(*config.max_concurrency_cap));
}

MixtureSample generate_sample(std::span<const AnnotatedTranscript> pool, const MixtureConfig& config,
                              std::size_t index) {
  Rng rng(derive_seed(config.rng_seed, index));
  auto sample = sample_mixture(pool, config, rng);
  sample.transcript.sample_id = "sim-" + std::to_string(index);
  return sample;
}

void generate_dataset(std::span<const AnnotatedTranscript> pool, const MixtureConfig& config, std::size_t n,
                      const std::function<void(MixtureSample&&)>& sink) {
  for (std::size_t i = 0; i < n; ++i) sink(generate_sample(pool, config, i));
}

std::vector<MixtureSample> generate_dataset(std::span<const AnnotatedTranscript> pool, const MixtureConfig& config,
                                            std::size_t n) {
  std::vector<MixtureSample> out;
  out.reserve(n);
  generate_dataset(pool, config, n, [&](MixtureSample&& s) { out.push_back(std::move(s)); });
  return out;
}

}  // namespace tsot
