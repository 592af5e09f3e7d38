// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsot/deserializer.hpp"

#include <gtest/gtest.h>

#include "support.hpp"

namespace tsot {
namespace {

using Strings = std::vector<std::string>;

SerializedTranscript stream(SerialMode mode, int channels, const Strings& tokens) {
  SerializedTranscript s{"s", channels, mode, {}};
  for (const auto& t : tokens) s.tokens.push_back(parse_serial_token(t));
  return s;
}

TEST(NewDecoderTest, Configurations) {
  auto two = new_decoder(2, SerialMode::kToggle);
  EXPECT_EQ(two.current_channel(), 1);
  EXPECT_EQ(two.num_channels(), 2);
  EXPECT_EQ(two.tokens_consumed(), 0u);
  EXPECT_EQ(two.streams().total_tokens(), 0u);

  auto four = new_decoder(4, SerialMode::kExplicit);
  EXPECT_EQ(four.streams().channels.size(), 4u);
  EXPECT_EQ(four.current_channel(), 1);

  EXPECT_THROW(new_decoder(1, SerialMode::kToggle), ConfigError);
  EXPECT_THROW(new_decoder(3, SerialMode::kToggle), ConfigError);
  EXPECT_THROW(new_decoder(1, SerialMode::kExplicit), ConfigError);
}

TEST(StepTest, ToggleStreamGolden) {
  auto d = new_decoder(2, SerialMode::kToggle);
  std::vector<Emission> emitted;
  for (const auto& t : Strings{"hello", "<cc>", "how", "<cc>", "world", "<cc>", "are"}) {
    if (auto e = d.step(parse_serial_token(t))) emitted.push_back(*e);
  }
  EXPECT_EQ(d.streams().channels[0], (Strings{"hello", "world"}));
  EXPECT_EQ(d.streams().channels[1], (Strings{"how", "are"}));
  EXPECT_EQ(emitted, (std::vector<Emission>{{1, "hello"}, {2, "how"}, {1, "world"}, {2, "are"}}));
  EXPECT_EQ(d.tokens_consumed(), 7u);
  EXPECT_TRUE(d.warnings().empty());
}

TEST(StepTest, OneEmissionPerLexicalToken) {
  auto [state, e1] = step(new_decoder(2, SerialMode::kToggle), Lexical{"a"});
  ASSERT_TRUE(e1.has_value());
  EXPECT_EQ(*e1, (Emission{1, "a"}));
  auto [state2, e2] = step(state, ChannelToggle{});
  EXPECT_FALSE(e2.has_value());
  EXPECT_EQ(state2.current_channel(), 2);
  // The functional form leaves its input untouched.
  EXPECT_EQ(state.current_channel(), 1);
}

TEST(StepTest, Errors) {
  auto d = new_decoder(2, SerialMode::kExplicit);
  EXPECT_THROW(d.step(ChannelSelect{3}), ChannelOutOfRange);
  EXPECT_THROW(d.step(ChannelToggle{}), ModeMismatch);
  auto t = new_decoder(2, SerialMode::kToggle);
  EXPECT_THROW(t.step(ChannelSelect{2}), ModeMismatch);
}

TEST(StepTest, LeadingChannelTokenWarns) {
  auto d = new_decoder(3, SerialMode::kExplicit);
  d.step(ChannelSelect{3});
  d.step(Lexical{"x"});
  EXPECT_EQ(d.streams().channels[2], (Strings{"x"}));
  ASSERT_EQ(d.warnings().size(), 1u);
}

TEST(DeserializeTest, Examples) {
  auto none = deserialize(stream(SerialMode::kToggle, 2, {"a", "b", "c"}));
  EXPECT_EQ(none.channels[0], (Strings{"a", "b", "c"}));
  EXPECT_TRUE(none.channels[1].empty());

  auto empty = deserialize(stream(SerialMode::kExplicit, 3, {}));
  EXPECT_EQ(empty.channels.size(), 3u);
  EXPECT_EQ(empty.total_tokens(), 0u);

  auto sel = deserialize(stream(SerialMode::kExplicit, 2, {"a", "<cc2>", "b", "<cc1>", "c"}));
  EXPECT_EQ(sel.channels[0], (Strings{"a", "c"}));
  EXPECT_EQ(sel.channels[1], (Strings{"b"}));

  EXPECT_THROW(deserialize(stream(SerialMode::kExplicit, 2, {"a", "<cc3>"})), ChannelOutOfRange);
}

TEST(StripCcTest, Examples) {
  EXPECT_EQ(strip_cc(stream(SerialMode::kToggle, 2, {"hello", "<cc>", "how"})), (Strings{"hello", "how"}));
  EXPECT_EQ(strip_cc(stream(SerialMode::kToggle, 2, {"x", "y"})), (Strings{"x", "y"}));
}

SerializedTranscript random_stream(std::mt19937_64& g) {
  std::uniform_int_distribution<int> len(0, 30), kind(0, 3), coin(0, 1);
  const bool toggle = coin(g) == 0;
  const int channels = toggle ? 2 : 2 + coin(g) + coin(g);
  std::uniform_int_distribution<int> ch(1, channels);
  SerializedTranscript s{"r", channels, toggle ? SerialMode::kToggle : SerialMode::kExplicit, {}};
  const int n = len(g);
  for (int i = 0; i < n; ++i) {
    if (kind(g) == 0) {
      if (toggle) s.tokens.push_back(ChannelToggle{});
      else s.tokens.push_back(ChannelSelect{ch(g)});
    } else {
      s.tokens.push_back(Lexical{"w" + std::to_string(i)});
    }
  }
  return s;
}

TEST(DeserializerPropertyTest, IncrementalEqualsBatchAndReplayIsDeterministic) {
  std::mt19937_64 g(201);
  for (int iter = 0; iter < 5000; ++iter) {
    auto s = random_stream(g);
    auto d = new_decoder(s.max_channels, s.mode);
    std::vector<std::string> emitted;
    std::vector<std::vector<std::string>> per_channel(static_cast<std::size_t>(s.max_channels));
    for (const auto& t : s.tokens) {
      if (auto e = d.step(t)) {
        emitted.push_back(e->token);
        per_channel[static_cast<std::size_t>(e->channel - 1)].push_back(e->token);
      }
    }
    const auto batch = deserialize(s);
    ASSERT_EQ(d.streams(), batch);
    ASSERT_EQ(per_channel, batch.channels);
    ASSERT_EQ(emitted, strip_cc(s));
    ASSERT_EQ(batch.total_tokens(), strip_cc(s).size());

    auto replay = new_decoder(s.max_channels, s.mode);
    for (const auto& t : s.tokens) replay.step(t);
    ASSERT_EQ(replay, d);
  }
}

TEST(DeserializerPropertyTest, ConsumerSideRoundTrip) {
  std::mt19937_64 g(202);
  for (int iter = 0; iter < 3000; ++iter) {
    auto t = testing::random_transcript(g);
    const int m = static_cast<int>(std::max<std::size_t>(2, testing::brute_force_concurrency(t)));
    auto streams = deserialize(serialize_m(t, m));
    std::string why;
    ASSERT_TRUE(testing::channels_consistent(t, streams, &why)) << why;
  }
}

}  // namespace
}  // namespace tsot
