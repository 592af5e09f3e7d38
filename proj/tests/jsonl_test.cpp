// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsot/jsonl.hpp"

#include <gtest/gtest.h>

#include "support.hpp"

namespace tsot {
namespace {

using testing::tok;

TEST(JsonlTest, TranscriptFieldOrderIsExact) {
  AnnotatedTranscript t{"s1", {tok("hello", "A", 800, "a1", true)}};
  EXPECT_EQ(jsonl::write_transcript(t),
            R"({"sample_id":"s1","tokens":[{"token":"hello","time_ms":800,"speaker":"A","utt":"a1","final":true}]})");
}

TEST(JsonlTest, SerializedRendering) {
  SerializedTranscript s{"s1", 3, SerialMode::kExplicit, {Lexical{"a"}, ChannelSelect{2}, Lexical{"b"}}};
  const auto line = jsonl::write_serialized(s);
  EXPECT_EQ(line, R"({"sample_id":"s1","mode":"explicit","max_channels":3,"tokens":["a","<cc2>","b"]})");
  EXPECT_EQ(jsonl::read_serialized(line), s);
  SerializedTranscript t{"s2", 2, SerialMode::kToggle, {Lexical{"a"}, ChannelToggle{}, Lexical{"b"}}};
  EXPECT_EQ(jsonl::write_serialized(t), R"({"sample_id":"s2","mode":"toggle","max_channels":2,"tokens":["a","<cc>","b"]})");
}

TEST(JsonlTest, RoundTripsRandomTranscripts) {
  std::mt19937_64 g(401);
  for (int i = 0; i < 300; ++i) {
    auto t = testing::random_transcript(g);
    ASSERT_EQ(jsonl::read_transcript(jsonl::write_transcript(t)), t);
    ASSERT_EQ(jsonl::read_transcript_record(jsonl::write_transcript(t)), t);
    auto s = serialize_two(t);
    ASSERT_EQ(jsonl::read_serialized(jsonl::write_serialized(s)), s);
  }
}

TEST(JsonlTest, MixtureRecordFeedsTranscriptAndReferenceReaders) {
  MixtureSample m;
  m.transcript = AnnotatedTranscript{"sim-0", {tok("x", "spk1", 10, "u1", true)}};
  m.references["spk1"] = {"x"};
  m.provenance.push_back(SourceProvenance{"src", "utt", "spk1", 1.1, 0, 0});
  const auto line = jsonl::write_mixture(m);
  EXPECT_EQ(line.rfind(R"({"sample_id":"sim-0","transcript":)", 0), 0u);
  EXPECT_EQ(jsonl::read_transcript_record(line), m.transcript);
  auto refs = jsonl::read_references(line);
  EXPECT_EQ(refs.sample_id, "sim-0");
  EXPECT_EQ(refs.references, m.references);
}

TEST(JsonlTest, Channels) {
  ChannelStreams c{{{"a", "c"}, {"b"}}};
  const auto line = jsonl::write_channels("s", c);
  EXPECT_EQ(line, R"({"sample_id":"s","channels":[["a","c"],["b"]]})");
  auto [id, back] = jsonl::read_channels(line);
  EXPECT_EQ(id, "s");
  EXPECT_EQ(back, c);
}

TEST(JsonlTest, ErrorsCarryLineNumbers) {
  auto expect_line = [](auto&& fn, std::size_t line) {
    try {
      fn();
      FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
    }
  };
  expect_line([] { jsonl::read_transcript("{not json", 4); }, 4);
  expect_line([] { jsonl::read_transcript(R"({"sample_id":"s"})", 5); }, 5);
  expect_line([] { jsonl::read_transcript(R"({"sample_id":"s","tokens":[{"token":"a","time_ms":"1","speaker":"A","utt":"u","final":true}]})", 6); }, 6);
  expect_line([] { jsonl::read_serialized(R"({"sample_id":"s","mode":"toggle","max_channels":2,"tokens":["<cc0>"]})", 7); }, 7);
  expect_line([] { jsonl::read_serialized(R"({"sample_id":"s","mode":"both","max_channels":2,"tokens":[]})", 8); }, 8);
  expect_line([] { jsonl::read_transcript("[1,2]", 9); }, 9);
}

}  // namespace
}  // namespace tsot
