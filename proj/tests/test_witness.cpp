#include "seqlocal/witness.hpp"

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "seqlocal/errors.hpp"
#include "seqlocal/polytope.hpp"
#include "seqlocal/quantum.hpp"

using namespace seqlocal;

namespace {

const double kS = oracle::kSqrt2;

SequentialCorrelation all_plus(std::size_t steps) {
  const auto det = oracle::deterministic(0, 0);
  std::map<History, SingleStepBox> cond;
  for (std::size_t l = 1; l < steps; ++l)
    for (const auto& h : History::all(Scenario{}, l)) cond.emplace(h, det);
  return compose(det, cond, steps);
}

SequentialCorrelation random_p_member(Rng& rng) {
  std::map<History, SingleStepBox> cond;
  for (const auto& h : History::all(Scenario{}, 1)) cond.emplace(h, oracle::random_ns_box(rng));
  return compose(oracle::random_ns_box(rng), cond);
}

}  // namespace

TEST(StandardChsh, examples) {
  EXPECT_EQ(standard_chsh(oracle::pr(0, 0, 0)), 4.0);
  EXPECT_EQ(standard_chsh(oracle::deterministic(0, 0)), 2.0);
  EXPECT_NEAR(standard_chsh(first_step_marginal(simulate(canonical_strategy(2)))), 2 * kS, 1e-9);
}

TEST(RescaledChsh, examples) {
  EXPECT_EQ(rescaled_chsh(oracle::deterministic(0, 0)), 3.0);
  EXPECT_EQ(rescaled_chsh(oracle::pr(0, 0, 0)), 4.0);
  EXPECT_NEAR(rescaled_chsh(first_step_marginal(simulate(canonical_strategy(2)))), kS + 2, 1e-9);
}

TEST(RescaledChsh, identity_with_standard_form) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const auto box = i % 3 == 0 ? oracle::random_signaling_box(rng)
                     : i % 3 == 1 ? oracle::random_ns_box(rng)
                                  : oracle::random_boundary_box(rng);
    EXPECT_NEAR(rescaled_chsh(box), (4.0 + standard_chsh(box)) / 2.0, 1e-12);
    EXPECT_NEAR(standard_chsh(box), oracle::chsh(box), 1e-14);
  }
}

TEST(ConcatenatedChsh, examples) {
  EXPECT_EQ(concatenated_chsh(all_plus(2)), 6.0);
  EXPECT_NEAR(concatenated_chsh(simulate(canonical_strategy(2))), 4 + 4 * kS, 1e-9);
  ExtremePointSpec spec;
  spec.first = 16;
  for (const auto& h : History::all(Scenario{}, 1))
    if (oracle::pr(0, 0, 0)(h[0].a, h[0].b, h[0].x, h[0].y) > 0) spec.per_history[h] = 16;
  EXPECT_EQ(concatenated_chsh(compose_extreme_point(spec)), 16.0);
}

TEST(ConcatenatedChsh, matches_multilinear_oracle) {
  Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const auto corr = i % 2 ? random_p_member(rng) : simulate(random_strategy(Scenario{}, 2, 3, rng));
    const double expect = oracle::concatenated_witness(corr);
    EXPECT_NEAR(concatenated_chsh(corr), expect, 1e-12);
    EXPECT_NEAR(concatenated_chsh_linear(corr), expect, 1e-12);
    EXPECT_NEAR(concatenated_chsh_L(corr, 2), expect, 1e-12);
  }
}

TEST(ConcatenatedChsh, zero_histories_contribute_nothing) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto corr = compose_extreme_point(random_extreme_point_spec(rng, false));
    EXPECT_NEAR(concatenated_chsh(corr), oracle::concatenated_witness(corr), 1e-12);
  }
}

TEST(ConcatenatedChshL, three_steps) {
  EXPECT_NEAR(concatenated_chsh_L(simulate(canonical_strategy(3)), 3), 16 + 12 * kS, 1e-9);
  EXPECT_EQ(concatenated_chsh_L(all_plus(3), 3), 18.0);
  EXPECT_THROW(concatenated_chsh_L(all_plus(3), 2), StructuralError);
  EXPECT_THROW(concatenated_chsh(all_plus(3)), StructuralError);
  const auto corr = all_plus(3);
  const auto c = witness_coefficients(corr.scenario());
  double linear = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) linear += c[i] * corr[i];
  EXPECT_EQ(linear, 18.0);
}

TEST(ConcatenatedChsh, linear_in_the_tensor) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_p_member(rng);
    const auto q = compose_extreme_point(random_extreme_point_spec(rng, false));
    const double lambda = rng.uniform();
    const auto mixed = SequentialCorrelation::mix(p, q, lambda);
    EXPECT_NEAR(concatenated_chsh_linear(mixed),
                lambda * concatenated_chsh_linear(p) + (1 - lambda) * concatenated_chsh_linear(q), 1e-12);
    EXPECT_NEAR(concatenated_chsh(mixed), concatenated_chsh_linear(mixed), 1e-12);
  }
}

TEST(Bounds, ladder) {
  const auto b2 = bounds(2);
  EXPECT_EQ(b2.local, 6.0);
  EXPECT_NEAR(b2.qubit_projective, 6.8284271247, 1e-10);
  EXPECT_NEAR(b2.quantum, 9.6568542495, 1e-10);
  const auto b3 = bounds(3);
  EXPECT_EQ(b3.local, 18.0);
  EXPECT_NEAR(b3.qubit_projective, 20.4852813742, 1e-10);
  EXPECT_NEAR(b3.quantum, 32.9705627485, 1e-10);
  EXPECT_NEAR(bounds(4).qubit_projective, 61.4558441227, 1e-10);
  for (std::size_t L = 2; L < 10; ++L) {
    const auto b = bounds(L);
    EXPECT_LE(b.local, b.qubit_projective);
    EXPECT_LE(b.qubit_projective, b.quantum);
  }
  EXPECT_THROW(bounds(1), StructuralError);
}

TEST(Classify, buckets) {
  EXPECT_EQ(classify(9.65, 2), WitnessClass::BeyondQubitWithinQuantum);
  EXPECT_EQ(classify(6.0, 2), WitnessClass::Local);
  EXPECT_EQ(classify(6.5, 2), WitnessClass::BeyondLocalWithinQubit);
  EXPECT_EQ(classify(16.0, 2), WitnessClass::SupraQuantum);
  EXPECT_EQ(classify(4 + 4 * kS, 2), WitnessClass::BeyondQubitWithinQuantum);
  EXPECT_EQ(classify(bounds(2).qubit_projective, 2), WitnessClass::BeyondLocalWithinQubit);
  EXPECT_EQ(to_string(WitnessClass::BeyondQubitWithinQuantum), "beyond-qubit-within-quantum");
  EXPECT_EQ(to_string(WitnessClass::SupraQuantum), "supra-quantum");
}

TEST(Report, evaluate_witness_canonical) {
  const auto r = evaluate_witness(simulate(canonical_strategy(2)));
  EXPECT_EQ(r.L, 2u);
  EXPECT_NEAR(r.value, 9.6568542, 1e-7);
  EXPECT_EQ(r.classification, WitnessClass::BeyondQubitWithinQuantum);
  const auto r3 = evaluate_witness(simulate(canonical_strategy(3)));
  EXPECT_EQ(r3.L, 3u);
  EXPECT_NEAR(r3.value, 16 + 12 * kS, 1e-9);
}

TEST(Canonical, supported_lengths) {
  EXPECT_THROW(canonical_strategy(1), StructuralError);
  EXPECT_THROW(canonical_strategy(4), StructuralError);
}

TEST(Canonical, two_bell_pairs_give_identical_tensor) {
  auto s = canonical_strategy(2);
  const auto phi2 = maximally_entangled_state(2).matrix();
  const auto pairs = tensor_product(phi2, phi2);  // A1 B1 A2 B2
  ComplexMatrix regrouped(16, 16);
  auto to_abab = [](std::size_t i) {  // index in A1 A2 B1 B2 -> A1 B1 A2 B2
    const std::size_t a1 = (i >> 3) & 1, a2 = (i >> 2) & 1, b1 = (i >> 1) & 1, b2 = i & 1;
    return (a1 << 3) | (b1 << 2) | (a2 << 1) | b2;
  };
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c) regrouped(r, c) = pairs(to_abab(r), to_abab(c));
  const auto reference = simulate(s);
  s.state = DensityMatrix(regrouped);
  EXPECT_LT(max_abs_diff(simulate(s), reference), 1e-15);
}

TEST(Properties, q_members_stay_below_local_bound) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto corr = sample_Q(seed, 1 + seed % 6);
    ASSERT_TRUE(membership_Q(corr).member);
    EXPECT_LE(concatenated_chsh(corr), bounds(2).local + 1e-9);
  }
}
