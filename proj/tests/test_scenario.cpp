#include "seqlocal/scenario.hpp"

#include <set>

#include "gtest/gtest.h"
#include "seqlocal/errors.hpp"
#include "seqlocal/rng.hpp"

using namespace seqlocal;

TEST(Scenario, default_sizes) {
  const Scenario s;
  EXPECT_EQ(s.outcome_blocks(), 16u);
  EXPECT_EQ(s.setting_blocks(), 16u);
  EXPECT_EQ(s.size(), 256u);
  EXPECT_EQ(s.with_steps(3).size(), 4096u);
  EXPECT_EQ(s.with_steps(1).size(), 16u);
  EXPECT_EQ((Scenario{2, 3, 2}).size(), 16u * 81u);
}

TEST(Scenario, strides_follow_slot_order) {
  const Scenario s;
  // a1 + 2 b1 + 4 a2 + 8 b2
  EXPECT_EQ(s.outcome_stride(0, Party::Alice), 1u);
  EXPECT_EQ(s.outcome_stride(0, Party::Bob), 2u);
  EXPECT_EQ(s.outcome_stride(1, Party::Alice), 4u);
  EXPECT_EQ(s.outcome_stride(1, Party::Bob), 8u);
  const Scenario t{2, 3, 2};
  EXPECT_EQ(t.setting_stride(1, Party::Bob), 27u);
}

TEST(Scenario, rejects_degenerate_and_huge) {
  EXPECT_THROW((Scenario{0, 2, 2}).check(), StructuralError);
  EXPECT_THROW((Scenario{2, 1, 2}).check(), StructuralError);
  EXPECT_THROW((Scenario{2, 2, 1}).check(), StructuralError);
  EXPECT_THROW((Scenario{7, 2, 2}).check(), StructuralError);
  EXPECT_THROW((Scenario{100, 2, 2}).check(), StructuralError);
  EXPECT_NO_THROW((Scenario{3, 2, 2}).check());
}

TEST(History, key_round_trip) {
  const History h({{1, 0, 1, 1}, {0, 1, 0, 1}});
  EXPECT_EQ(h.key(), "1,0,1,1;0,1,0,1");
  EXPECT_EQ(History::parse(h.key()), h);
  EXPECT_EQ(History::parse(""), History());
  EXPECT_EQ(History(0, 1, 1, 0).key(), "0,1,1,0");
}

TEST(History, parse_rejects_garbage) {
  for (const char* bad : {"1,0,1", "1,0,1,1,", "a,b,c,d", "1,0,1,1;", "1,,0,1", "1;0;1;1"}) {
    EXPECT_THROW(History::parse(bad), StructuralError) << bad;
  }
}

TEST(History, check_ranges) {
  EXPECT_THROW(History(2, 0, 0, 0).check(Scenario{}), StructuralError);
  EXPECT_THROW(History(0, 0, 0, -1).check(Scenario{}), StructuralError);
  EXPECT_NO_THROW(History(1, 1, 1, 1).check(Scenario{}));
  EXPECT_NO_THROW(History(2, 0, 0, 0).check(Scenario{2, 2, 3}));
}

TEST(History, all_enumerates_distinct_histories) {
  const Scenario s;
  EXPECT_EQ(History::all(s, 0).size(), 1u);
  const auto one = History::all(s, 1);
  EXPECT_EQ(one.size(), 16u);
  EXPECT_EQ(std::set<History>(one.begin(), one.end()).size(), 16u);
  EXPECT_TRUE(std::is_sorted(one.begin(), one.end()));
  EXPECT_EQ(History::all(s, 2).size(), 256u);
}

TEST(Rng, reproducible_and_split_is_stable) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  Rng c(42);
  const auto before = c.split(7).next_u64();
  for (int i = 0; i < 10; ++i) c.next_u64();
  EXPECT_EQ(c.split(7).next_u64(), before);
  EXPECT_NE(c.split(7).next_u64(), c.split(8).next_u64());
  EXPECT_NE(Rng(1).next_u64(), Rng(2).next_u64());
}

TEST(Rng, distributions_have_expected_moments) {
  Rng rng(5);
  const int n = 200000;
  double mu = 0.0, m2 = 0.0, u = 0.0;
  std::array<int, 3> hist{};
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    mu += z;
    m2 += z * z;
    u += rng.uniform();
    ++hist[rng.below(3)];
  }
  EXPECT_NEAR(mu / n, 0.0, 0.01);
  EXPECT_NEAR(m2 / n, 1.0, 0.02);
  EXPECT_NEAR(u / n, 0.5, 0.005);
  for (int h : hist) EXPECT_NEAR(h / double(n), 1.0 / 3.0, 0.005);
  const auto w = rng.dirichlet(7);
  double total = 0.0;
  for (double x : w) {
    EXPECT_GT(x, 0.0);
    total += x;
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
}
