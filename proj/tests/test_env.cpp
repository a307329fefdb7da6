#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "seqelim/env.hpp"

using namespace seqelim;

TEST(Env, RejectsBadMeans) {
  EXPECT_THROW(make_env({0.5}), std::invalid_argument);
  EXPECT_THROW(make_env({0.5, 1.2}), std::invalid_argument);
  EXPECT_THROW(make_env({-0.1, 0.3}), std::invalid_argument);
  EXPECT_THROW(make_env({0.5, std::nan("")}), std::invalid_argument);
  try {
    make_env({0.7, 0.7, 0.2});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "no unique best arm");
  }
}

TEST(Env, BestArmIsTrackedByIndex) {
  const auto env = make_env({0.2, 0.9, 0.5});
  EXPECT_EQ(env.best_arm(), 1u);
  EXPECT_EQ(env.num_arms(), 3u);
  EXPECT_DOUBLE_EQ(env.mean(2), 0.5);
}

TEST(Env, GapsSortedWithStableTies) {
  const auto env = make_env({0.4, 0.9, 0.4, 0.8});
  const auto g = compute_gaps(env);
  EXPECT_EQ(g.sorted_index, (std::vector<ArmIndex>{1, 3, 0, 2}));
  EXPECT_DOUBLE_EQ(g.at_rank(0), 0.0);
  EXPECT_NEAR(g.at_rank(1), 0.1, 1e-15);
  EXPECT_NEAR(g.gaps[2], 0.5, 1e-15);
}

TEST(Rng, Mix64MatchesSplitMix64Reference) {
  // First two outputs of the reference SplitMix64 generator seeded with 0.
  EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(mix64(0x9E3779B97F4A7C15ULL), 0x6E789E6AA1B965F4ULL);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    if (i == 0) {
      firsts.insert(x);
      firsts.insert(c());
      firsts.insert(d());
    }
  }
  EXPECT_EQ(firsts.size(), 3u);
}

TEST(Rng, UniformRangeAndBernoulliFrequency) {
  RngStream s(7, 0);
  const int n = 200000;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int i = 0; i < n; ++i) ones += s.bernoulli(0.3);
  const double sigma = std::sqrt(0.3 * 0.7 / n);
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.3, 5 * sigma);
  EXPECT_FALSE(RngStream(1, 1).bernoulli(0.0));
  EXPECT_TRUE(RngStream(1, 1).bernoulli(1.0));
}

TEST(Rewards, ArmStreamsIgnoreInterleaving) {
  const auto env = make_env({0.5, 0.5 - 1e-3, 0.2});
  StreamRewards x(env, 99), y(env, 99);
  std::vector<double> xs, ys;
  for (int i = 0; i < 20; ++i) {
    xs.push_back(x.draw(1));
    x.draw(0);
  }
  for (int i = 0; i < 20; ++i) y.draw(2);
  for (int i = 0; i < 20; ++i) ys.push_back(y.draw(1));
  EXPECT_EQ(xs, ys);
  EXPECT_THROW(x.draw(3), std::out_of_range);
}

TEST(Rewards, ReplayAndRecording) {
  ReplayRewards replay({{1, 0}, {0.25}});
  RecordingRewards rec(replay);
  EXPECT_EQ(rec.draw(0), 1.0);
  EXPECT_EQ(rec.draw(1), 0.25);
  EXPECT_EQ(rec.draw(0), 0.0);
  EXPECT_THROW(rec.draw(1), std::out_of_range);
  EXPECT_EQ(rec.recorded()[0], (std::vector<double>{1, 0}));
  EXPECT_EQ(rec.recorded()[1], (std::vector<double>{0.25}));
}

TEST(Accumulator, Modes) {
  ArmSampleAccumulator cum(2, ArmSampleAccumulator::Mode::cumulative);
  ArmSampleAccumulator fresh(2, ArmSampleAccumulator::Mode::per_round_reset);
  EXPECT_EQ(cum.mean(0), -std::numeric_limits<double>::infinity());
  for (auto* acc : {&cum, &fresh}) {
    acc->add(0, 1.0);
    acc->add(0, 0.0);
    acc->start_round();
    acc->add(0, 1.0);
  }
  EXPECT_EQ(cum.count(0), 3u);
  EXPECT_DOUBLE_EQ(cum.mean(0), 2.0 / 3.0);
  EXPECT_EQ(fresh.count(0), 1u);
  EXPECT_DOUBLE_EQ(fresh.mean(0), 1.0);
  cum.set(1, 4, 3.0);
  EXPECT_DOUBLE_EQ(cum.mean(1), 0.75);
}
