#include "seqlocal/parallel.hpp"

#include <omp.h>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "seqlocal/witness.hpp"

using namespace seqlocal;

namespace {

// Every kernel must be bit-identical to its serial reference for any thread count.
class ThreadCounts : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

bool same(const MembershipVerdict& a, const MembershipVerdict& b) {
  return a.member == b.member && a.violated == b.violated && a.margin == b.margin && a.inconclusive == b.inconclusive;
}

}  // namespace

TEST_P(ThreadCounts, simulate_matches_serial) {
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto s = random_strategy(Scenario{}, 2 + rng.below(2), 2, rng);
    EXPECT_EQ(omp::simulate(s), simulate(s));
  }
  const auto s3 = canonical_strategy(3);
  EXPECT_EQ(omp::simulate(s3), simulate(s3));
}

TEST_P(ThreadCounts, argmax_matches_serial_including_ties) {
  Rng rng(2);
  const auto tol = tol_vertex_set();
  for (int i = 0; i < 20; ++i) {
    std::vector<double> dir(tol.dim());
    for (auto& d : dir) d = rng.normal();
    EXPECT_EQ(omp::argmax_vertex(tol, dir), tol.argmax(dir));
  }
  const std::vector<double> flat(tol.dim(), 1.0);  // every vertex ties
  EXPECT_EQ(omp::argmax_vertex(tol, flat), 0u);
  EXPECT_EQ(tol.argmax(flat), 0u);
}

TEST_P(ThreadCounts, qubit_sampling_matches_serial) {
  const auto a = omp::sample_qubit_projective_strategies(300, 42);
  const auto b = sample_qubit_projective_strategies(300, 42);
  EXPECT_EQ(a.max_value, b.max_value);
  EXPECT_EQ(a.argmax, b.argmax);
}

TEST_P(ThreadCounts, locality_comparison_matches_serial) {
  Rng rng(3);
  std::vector<SingleStepBox> boxes;
  for (int i = 0; i < 200; ++i) boxes.push_back(i % 2 ? oracle::random_boundary_box(rng) : oracle::random_signaling_box(rng));
  const auto a = omp::compare_locality_oracles(boxes, 1e-7, {});
  const auto b = compare_locality_oracles(boxes, 1e-7, {});
  EXPECT_EQ(a.total, b.total);
  EXPECT_EQ(a.local, b.local);
  EXPECT_EQ(a.disagreements, b.disagreements);
  EXPECT_EQ(a.inconclusive, b.inconclusive);
}

TEST_P(ThreadCounts, membership_batch_matches_serial) {
  Rng rng(4);
  std::vector<SequentialCorrelation> batch;
  for (int i = 0; i < 50; ++i) {
    batch.push_back(i % 2 ? sample_Q(rng.next_u64(), 3) : compose_extreme_point(random_extreme_point_spec(rng, false)));
  }
  const auto got = omp::membership_Q_batch(batch);
  ASSERT_EQ(got.size(), batch.size());
  for (std::size_t k = 0; k < batch.size(); ++k) EXPECT_TRUE(same(got[k], membership_Q(batch[k]))) << k;
}

TEST_P(ThreadCounts, gilbert_with_parallel_oracle_matches_serial) {
  const auto tol = tol_vertex_set();
  const auto target = sample_TOL(5, 6);
  GilbertOptions par;
  par.parallel_oracle = true;
  const auto a = gilbert_distance(target.values(), tol, par);
  const auto b = gilbert_distance(target.values(), tol, {});
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.distance_trace, b.distance_trace);
}

INSTANTIATE_TEST_SUITE_P(Parallel, ThreadCounts, ::testing::Values(1, 2, 4));
