#pragma once

// OpenMP kernels. Each has a serial reference elsewhere in the library and must reproduce it
// exactly (bit for bit) for any thread count; the tests and the benchmark compare the two.

#include <cstdint>
#include <span>
#include <vector>

#include "seqlocal/optimize.hpp"
#include "seqlocal/polytope.hpp"
#include "seqlocal/quantum.hpp"

namespace seqlocal::omp {

int max_threads();

/// Parallel over first-step records; reference: seqlocal::simulate.
SequentialCorrelation simulate(const SequentialStrategy& strategy);

/// Reference: VertexSet::argmax (same lowest-index tie-break).
std::size_t argmax_vertex(const VertexSet& vertices, std::span<const double> dir);

/// Reference: seqlocal::sample_qubit_projective_strategies.
QubitSampleReport sample_qubit_projective_strategies(std::size_t n, std::uint64_t seed);

/// Reference: seqlocal::compare_locality_oracles.
LocalityAgreement compare_locality_oracles(std::span<const SingleStepBox> boxes, double tol, const GilbertOptions& opts);

/// membership_Q over a batch, in input order.
std::vector<MembershipVerdict> membership_Q_batch(std::span<const SequentialCorrelation> batch, double tol = kDefaultTol);

}  // namespace seqlocal::omp
