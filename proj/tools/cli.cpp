// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "io.hpp"
#include "tsot/deserializer.hpp"
#include "tsot/errors.hpp"
#include "tsot/jsonl.hpp"
#include "tsot/mixture.hpp"
#include "tsot/scorer.hpp"
#include "tsot/serializer.hpp"
#include "tsot/transcript.hpp"
#include "tsot/version.hpp"

namespace tsot::cli {
namespace {

using Json = nlohmann::ordered_json;

/// Raised for flag combinations CLI11 cannot express; exits with kExitUsageError.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs and outputs opened during a run, kept for the manifest.
class Session {
 public:
  Session(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err) {}

  Input& open_input(const std::string& path) {
    inputs_.push_back(std::make_unique<Input>(path, in_));
    return *inputs_.back();
  }
  Output& open_output(const std::string& path) {
    outputs_.push_back(std::make_unique<Output>(path, out_));
    return *outputs_.back();
  }
  std::ostream& err() { return err_; }

  Json digests_in() const { return digests(inputs_); }
  Json digests_out() const { return digests(outputs_); }

 private:
  template <typename T>
  static Json digests(const std::vector<std::unique_ptr<T>>& files) {
    Json list = Json::array();
    for (const auto& f : files) {
      if constexpr (std::is_same_v<T, Output>) f->stream().flush();
      list.push_back({{"path", f->path()}, {"bytes", f->bytes()}, {"sha256", f->digest()}});
    }
    return list;
  }

  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
  std::vector<std::unique_ptr<Input>> inputs_;
  std::vector<std::unique_ptr<Output>> outputs_;
};

bool blank(std::string_view line) { return line.find_first_not_of(" \t\r") == std::string_view::npos; }

/// Calls `fn(line, line_no)` for every non-blank line.
void for_each_line(std::istream& in, const std::function<void(const std::string&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!blank(line)) fn(line, line_no);
  }
}

std::string sample_label(const std::string& sample_id, std::size_t line_no) {
  return sample_id.empty() ? "line " + std::to_string(line_no) : "sample " + sample_id;
}

SerialMode mode_flag(const std::string& mode, int channels, bool strict_literal) {
  const SerialMode m = parse_serial_mode(mode);
  if (m == SerialMode::kToggle && channels != 2) throw UsageError("--mode toggle requires --channels 2");
  if (m == SerialMode::kToggle && strict_literal) throw UsageError("--strict-literal requires --mode explicit");
  return m;
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string input = "-";
  std::string output = "-";
  std::vector<std::string> speakers;
  std::int64_t gap_ms = 500;
  std::string lexicon;
  bool permissive = false;
};

Lexicon read_lexicon(std::istream& in) {
  Lexicon lexicon;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    if (line.starts_with(";;")) return;
    std::istringstream fields(line);
    std::string word, piece;
    fields >> word;
    std::vector<std::string> pieces;
    while (fields >> piece) pieces.push_back(piece);
    if (pieces.empty()) throw ParseError(line_no, "lexicon entry '" + word + "' has no subwords");
    lexicon.insert_or_assign(word, std::move(pieces));
  });
  return lexicon;
}

int cmd_ingest(const IngestArgs& a, Session& s) {
  CtmOptions options;
  options.silence_gap_ms = a.gap_ms;
  for (const auto& entry : a.speakers) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size()) {
      throw UsageError("--speaker expects LABEL=NAME, got '" + entry + "'");
    }
    options.channel_to_speaker[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  std::optional<Lexicon> lexicon;
  if (!a.lexicon.empty()) lexicon = read_lexicon(s.open_input(a.lexicon).stream());

  auto corpus = import_ctm_corpus(s.open_input(a.input).stream(), options);
  auto& out = s.open_output(a.output).stream();
  int status = kExitOk;
  for (auto& t : corpus) {
    try {
      if (lexicon) t = expand_subwords(t, *lexicon, a.permissive);
      require_valid(t);
      out << jsonl::write_transcript(t) << '\n';
    } catch (const Error& e) {
      s.err() << "sample " << t.sample_id << ": " << e.what() << '\n';
      status = kExitDataError;
    }
  }
  return status;
}

// ---- serialize ------------------------------------------------------------

struct SerializeArgs {
  std::string input = "-";
  std::string output = "-";
  std::string mode = "toggle";
  int channels = 2;
  bool strict_literal = false;
};

int cmd_serialize(const SerializeArgs& a, Session& s) {
  const SerialMode mode = mode_flag(a.mode, a.channels, a.strict_literal);
  auto& in = s.open_input(a.input).stream();
  auto& out = s.open_output(a.output).stream();
  int status = kExitOk;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    std::string id;
    try {
      const auto t = jsonl::read_transcript_record(line, line_no);
      id = t.sample_id;
      const auto serialized = mode == SerialMode::kToggle
                                  ? serialize_two(t)
                                  : serialize_m(t, a.channels, SerializeOptions{.strict_literal = a.strict_literal});
      out << jsonl::write_serialized(serialized) << '\n';
    } catch (const Error& e) {
      s.err() << sample_label(id, line_no) << ": " << e.what() << '\n';
      status = kExitDataError;
    }
  });
  return status;
}

// ---- deserialize ----------------------------------------------------------

struct DeserializeArgs {
  std::string input = "-";
  std::string output = "-";
  bool streaming = false;
  std::string mode = "toggle";
  int channels = 2;
};

int cmd_deserialize(const DeserializeArgs& a, Session& s) {
  auto& in = s.open_input(a.input).stream();
  auto& out = s.open_output(a.output).stream();

  if (!a.streaming) {
    int status = kExitOk;
    for_each_line(in, [&](const std::string& line, std::size_t line_no) {
      std::string id;
      try {
        const auto serialized = jsonl::read_serialized(line, line_no);
        id = serialized.sample_id;
        out << jsonl::write_channels(serialized.sample_id, deserialize(serialized)) << '\n';
      } catch (const Error& e) {
        s.err() << sample_label(id, line_no) << ": " << e.what() << '\n';
        status = kExitDataError;
      }
    });
    return status;
  }

  DecoderState state = new_decoder(a.channels, mode_flag(a.mode, a.channels, false));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    std::optional<Emission> emitted;
    const std::size_t warnings_before = state.warnings().size();
    try {
      emitted = state.step(parse_serial_token(line));
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    for (std::size_t w = warnings_before; w < state.warnings().size(); ++w) {
      s.err() << "line " << line_no << ": warning: " << state.warnings()[w] << '\n';
    }
    if (emitted) out << emitted->channel << '\t' << emitted->token << '\n' << std::flush;
  }
  return kExitOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string pool;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double p = 50.0;
  int uniform_k = 0;
  std::vector<double> speeds{1.0};
  std::size_t max_concurrency = 0;
  std::string output = "-";
};

int cmd_simulate(const SimulateArgs& a, Session& s) {
  MixtureConfig cfg;
  cfg.rng_seed = a.seed;
  cfg.single_speaker_prob_p = a.p;
  if (a.uniform_k > 0) {
    cfg.speaker_count_law = SpeakerCountLaw::kUniformOneToK;
    cfg.max_speakers = a.uniform_k;
  }
  cfg.speed_ratios = a.speeds;
  if (a.max_concurrency > 0) cfg.max_concurrency_cap = a.max_concurrency;
  try {
    check_config(cfg);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }

  std::vector<AnnotatedTranscript> pool;
  for_each_line(s.open_input(a.pool).stream(), [&](const std::string& line, std::size_t line_no) {
    pool.push_back(jsonl::read_transcript_record(line, line_no));
  });
  auto& out = s.open_output(a.output).stream();
  generate_dataset(pool, cfg, a.n, [&](MixtureSample&& sample) { out << jsonl::write_mixture(sample) << '\n'; });
  return kExitOk;
}

// ---- roundtrip ------------------------------------------------------------

struct RoundTripArgs {
  std::string input = "-";
  std::string output = "-";
  std::string mode = "toggle";
  int channels = 2;
  bool strict_literal = false;
};

int cmd_roundtrip(const RoundTripArgs& a, Session& s) {
  RoundTripOptions options;
  options.mode = mode_flag(a.mode, a.channels, a.strict_literal);
  options.channels = a.channels;
  options.strict_literal = a.strict_literal;

  auto& in = s.open_input(a.input).stream();
  std::size_t samples = 0, failed = 0;
  Json first = nullptr;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    ++samples;
    std::string id;
    Json failure = nullptr;
    try {
      const auto t = jsonl::read_transcript_record(line, line_no);
      id = t.sample_id;
      const auto report = round_trip_check(t, options);
      if (!report.ok) {
        failure = {{"sample_id", id},
                   {"utterance_id", report.utterance_id ? Json(*report.utterance_id) : Json(nullptr)},
                   {"divergence", report.divergence}};
      }
    } catch (const Error& e) {
      failure = {{"sample_id", id}, {"utterance_id", nullptr}, {"divergence", e.what()}};
    }
    if (failure.is_null()) return;
    ++failed;
    if (first.is_null()) {
      first = failure;
      first["line"] = line_no;
      s.err() << "first mismatch: " << sample_label(id, line_no) << ": " << failure["divergence"].get<std::string>()
              << '\n'
              << line << '\n';
    }
  });
  Json summary = {{"samples", samples}, {"passed", samples - failed}, {"failed", failed}, {"first_failure", first}};
  s.open_output(a.output).stream() << summary.dump() << '\n';
  return failed == 0 ? kExitOk : kExitDataError;
}

// ---- score ----------------------------------------------------------------

struct ScoreArgs {
  std::string refs;
  std::string hyps;
  std::string by_condition;
  bool lowercase = false;
  std::string output = "-";
};

Json counts_json(const EditCounts& c) {
  return {{"sub", c.substitutions},
          {"ins", c.insertions},
          {"del", c.deletions},
          {"ref_len", c.ref_len},
          {"wer", word_error_rate(c)}};
}

int cmd_score(const ScoreArgs& a, Session& s) {
  std::map<std::string, ChannelStreams> hyps;
  for_each_line(s.open_input(a.hyps).stream(), [&](const std::string& line, std::size_t line_no) {
    auto [id, streams] = jsonl::read_channels(line, line_no);
    if (!hyps.emplace(id, std::move(streams)).second) {
      throw ParseError(line_no, "duplicate hypothesis for sample '" + id + "'");
    }
  });

  const ScoreOptions options{.lowercase = a.lowercase};
  EditCounts total;
  Json assignment = Json::array();
  std::vector<std::string> condition_order;
  std::map<std::string, EditCounts> by_condition;
  std::set<std::string> seen;

  for_each_line(s.open_input(a.refs).stream(), [&](const std::string& line, std::size_t line_no) {
    const auto record = jsonl::read_references(line, line_no);
    if (!seen.insert(record.sample_id).second) {
      throw ParseError(line_no, "duplicate reference for sample '" + record.sample_id + "'");
    }
    const auto hyp = hyps.find(record.sample_id);
    const ChannelStreams channels = hyp == hyps.end() ? ChannelStreams{} : hyp->second;
    const auto report = score_deserialized(channels, record.references, options);
    total += report.counts;

    // Map back from the non-empty channels the scorer saw to channel slots.
    std::vector<std::string> speakers;
    for (const auto& [speaker, words] : record.references) speakers.push_back(speaker);
    Json slots = Json::array();
    std::size_t h = 0;
    for (const auto& channel : channels.channels) {
      if (channel.empty()) {
        slots.push_back(nullptr);
        continue;
      }
      const auto& ref = report.assignment[h++];
      slots.push_back(ref ? Json(speakers[*ref]) : Json(nullptr));
    }
    assignment.push_back({{"sample_id", record.sample_id}, {"channels", slots}});

    if (!a.by_condition.empty()) {
      const auto raw = Json::parse(line);
      const auto field = raw.find(a.by_condition);
      if (field == raw.end()) {
        throw ParseError(line_no, "sample '" + record.sample_id + "' lacks field '" + a.by_condition + "'");
      }
      const std::string condition = field->is_string() ? field->get<std::string>() : field->dump();
      auto [it, inserted] = by_condition.try_emplace(condition);
      if (inserted) condition_order.push_back(condition);
      it->second += report.counts;
    }
  });
  for (const auto& [id, streams] : hyps) {
    if (!seen.contains(id)) throw Error("hypothesis sample '" + id + "' has no reference");
  }

  Json result = counts_json(total);
  result["assignment"] = assignment;
  if (!condition_order.empty()) {
    std::vector<std::pair<std::string, WerReport>> reports;
    Json table = Json::array();
    for (const auto& condition : condition_order) {
      const auto& c = by_condition.at(condition);
      WerReport r;
      r.counts = c;
      r.wer = word_error_rate(c);
      reports.emplace_back(condition, r);
      Json row = {{"condition", condition}};
      row.update(counts_json(c));
      table.push_back(row);
    }
    result["conditions"] = table;
    result["macro_average"] = macro_average(reports).average;
  }
  s.open_output(a.output).stream() << result.dump() << '\n';
  return kExitOk;
}

// ---- manifest -------------------------------------------------------------

Json option_config(const CLI::App& command) {
  Json config = Json::object();
  for (const CLI::Option* opt : command.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    if (opt->get_expected_max() == 0) {
      config[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& results = opt->results();
      config[name] = results.size() == 1 ? Json(results.front()) : Json(results);
    } else if (!opt->get_default_str().empty()) {
      config[name] = opt->get_default_str();
    } else {
      config[name] = nullptr;
    }
  }
  return config;
}

void write_manifest(const std::string& path, const std::vector<std::string>& args, const CLI::App& command,
                    const Session& session, int exit_code, double seconds) {
  Json manifest = {{"tool", "tsot"},
                   {"version", std::string(kVersion)},
                   {"subcommand", command.get_name()},
                   {"argv", args},
                   {"config", option_config(command)},
                   {"inputs", session.digests_in()},
                   {"outputs", session.digests_out()},
                   {"exit_code", exit_code},
                   {"wall_clock_seconds", seconds}};
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open manifest '" + path + "' for writing");
  file << manifest.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Serialize, deserialize, simulate and score multi-talker token streams.", "tsot"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Write a JSON run manifest to this path");

  const auto existing = CLI::Validator(
      [](std::string& path) { return path == "-" ? std::string() : CLI::ExistingFile(path); }, "FILE|-");

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Convert CTM alignments to transcript JSONL");
  c_ingest->add_option("-i,--input", ingest.input, "CTM file, - for stdin")->capture_default_str()->check(existing);
  c_ingest->add_option("-o,--output", ingest.output, "Output JSONL, - for stdout")->capture_default_str();
  c_ingest->add_option("--speaker", ingest.speakers, "Rename a CTM label: LABEL=NAME (repeatable)");
  c_ingest->add_option("--gap-ms", ingest.gap_ms, "Silence that splits utterances")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  c_ingest->add_option("--lexicon", ingest.lexicon, "Word to subword lexicon: WORD PIECE...")
      ->check(CLI::ExistingFile);
  c_ingest->add_flag("--permissive", ingest.permissive, "Keep words missing from the lexicon");

  SerializeArgs serialize;
  auto* c_serialize = app.add_subcommand("serialize", "Serialize transcripts into channel-token streams");
  c_serialize->add_option("-i,--input", serialize.input, "Transcript or mixture JSONL")
      ->capture_default_str()
      ->check(existing);
  c_serialize->add_option("-o,--output", serialize.output, "Serialized JSONL")->capture_default_str();
  c_serialize->add_option("--mode", serialize.mode)->capture_default_str()->check(CLI::IsMember({"toggle", "explicit"}));
  c_serialize->add_option("--channels", serialize.channels)->capture_default_str()->check(CLI::Range(2, 1 << 20));
  c_serialize->add_flag("--strict-literal", serialize.strict_literal,
                        "Explicit mode without the first-token and same-speaker channel fixes");

  DeserializeArgs deser;
  auto* c_deser = app.add_subcommand("deserialize", "Split serialized streams into channels");
  c_deser->add_option("-i,--input", deser.input, "Serialized JSONL, or one token per line with --streaming")
      ->capture_default_str()
      ->check(existing);
  c_deser->add_option("-o,--output", deser.output)->capture_default_str();
  c_deser->add_flag("--streaming", deser.streaming, "Emit CHANNEL<TAB>TOKEN per word as it arrives");
  c_deser->add_option("--mode", deser.mode, "Streaming mode only")
      ->capture_default_str()
      ->check(CLI::IsMember({"toggle", "explicit"}));
  c_deser->add_option("--channels", deser.channels, "Streaming mode only")
      ->capture_default_str()
      ->check(CLI::Range(2, 1 << 20));

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Draw overlapping mixtures from single-utterance transcripts");
  c_sim->add_option("--pool", sim.pool, "Single-utterance transcript JSONL")->required()->check(existing);
  c_sim->add_option("--n", sim.n, "Number of samples")->required();
  c_sim->add_option("--seed", sim.seed, "Seed for every random draw")->required();
  auto* p_opt = c_sim->add_option("--p", sim.p, "Percent chance of a single-speaker sample")
                    ->capture_default_str()
                    ->check(CLI::Range(0.0, 100.0));
  auto* k_opt = c_sim->add_option("--uniform-k", sim.uniform_k, "Speaker count uniform on 1..K")
                    ->check(CLI::PositiveNumber);
  p_opt->excludes(k_opt);
  c_sim->add_option("--speed", sim.speeds, "Speed perturbation ratios")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--max-concurrency", sim.max_concurrency, "Reject mixtures above this concurrency")
      ->check(CLI::PositiveNumber);
  c_sim->add_option("-o,--output", sim.output, "Mixture JSONL")->capture_default_str();

  RoundTripArgs rt;
  auto* c_rt = app.add_subcommand("roundtrip", "Check that serialization round-trips per utterance");
  c_rt->add_option("-i,--input", rt.input, "Transcript or mixture JSONL")->capture_default_str()->check(existing);
  c_rt->add_option("-o,--output", rt.output, "Summary JSON")->capture_default_str();
  c_rt->add_option("--mode", rt.mode)->capture_default_str()->check(CLI::IsMember({"toggle", "explicit"}));
  c_rt->add_option("--channels", rt.channels)->capture_default_str()->check(CLI::Range(2, 1 << 20));
  c_rt->add_flag("--strict-literal", rt.strict_literal);

  ScoreArgs score;
  auto* c_score = app.add_subcommand("score", "Permutation-minimized WER of channels against references");
  c_score->add_option("--refs", score.refs, "Reference or mixture JSONL")->required()->check(existing);
  c_score->add_option("--hyps", score.hyps, "Channel JSONL")->required()->check(existing);
  c_score->add_option("--by-condition", score.by_condition, "Reference field naming the condition");
  c_score->add_flag("--lowercase", score.lowercase, "Compare case-insensitively");
  c_score->add_option("-o,--output", score.output, "Report JSON")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsageError;
  }

  CLI::App* command = app.get_subcommands().front();
  Session session(in, out, err);
  const auto start = std::chrono::steady_clock::now();
  int status = kExitOk;
  try {
    if (command == c_ingest) status = cmd_ingest(ingest, session);
    if (command == c_serialize) status = cmd_serialize(serialize, session);
    if (command == c_deser) status = cmd_deserialize(deser, session);
    if (command == c_sim) status = cmd_simulate(sim, session);
    if (command == c_rt) status = cmd_roundtrip(rt, session);
    if (command == c_score) status = cmd_score(score, session);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    status = kExitDataError;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!manifest_path.empty()) {
    try {
      write_manifest(manifest_path, args, *command, session, status, seconds);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitDataError;
    }
  }
  return status;
}

}  // namespace tsot::cli
