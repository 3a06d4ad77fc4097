#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seqlocal/polytope.hpp"
#include "seqlocal/quantum.hpp"

namespace seqlocal {

// ---------------------------------------------------------------------------------------------
// Seesaw

struct SeesawOptions {
  std::uint64_t seed = 0;
  std::size_t max_iters = 200;
  double tol = 1e-10;
};

struct SeesawResult {
  double value = 0.0;
  std::array<ComplexMatrix, 2> alice;  ///< +-1 observables per setting
  std::array<ComplexMatrix, 2> bob;
  std::size_t iterations = 0;
  std::vector<double> trajectory;  ///< objective after every half-step
};

/// Alternating maximization of the standard CHSH functional over +-1 observables. Local
/// dimensions must be at most 8.
SeesawResult seesaw_chsh(const DensityMatrix& state, std::array<std::size_t, 2> dims, const SeesawOptions& opts = {});

/// sum_xy (-1)^(xy) Tr[rho A_x (x) B_y].
double chsh_of_observables(const DensityMatrix& state, const std::array<ComplexMatrix, 2>& alice,
                           const std::array<ComplexMatrix, 2>& bob);

/// Two-outcome instrument of projectors (1 +- A)/2 for each observable.
KrausInstrument observable_instrument(const std::array<ComplexMatrix, 2>& observables);

// ---------------------------------------------------------------------------------------------
// Qubit strategy sampling

/// Random pure two-qubit state, rank-1 projective step-1 instruments, and rank-1 projective
/// step-2 effects drawn independently for every history.
SequentialStrategy random_qubit_projective_strategy(Rng& rng);

struct QubitSampleReport {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double max_value = 0.0;
  std::size_t argmax = 0;  ///< sample index; regenerate with Rng(seed).split(argmax)
};

/// Sample k uses Rng(seed).split(k), so serial and parallel runs agree exactly.
QubitSampleReport sample_qubit_projective_strategies(std::size_t n, std::uint64_t seed);
double qubit_sample_value(std::uint64_t seed, std::size_t k);

/// Seesaw-optimal step-1 observables on |Phi+>, then per history the step-2 effects that
/// project onto the (product) post-measurement state, which scores the local maximum 2.
SequentialStrategy seesaw_tuned_qubit_strategy(std::uint64_t seed);

// ---------------------------------------------------------------------------------------------
// Gilbert distance to a vertex hull

/// Finite point set in R^dim stored as sparse rows.
class VertexSet {
 public:
  explicit VertexSet(std::size_t dim) : dim_(dim) {}

  void add(std::span<const std::pair<std::uint32_t, double>> entries);
  void add_dense(std::span<const double> v);

  std::size_t size() const { return offsets_.size() - 1; }
  std::size_t dim() const { return dim_; }
  double dot(std::size_t v, std::span<const double> dir) const;
  void axpy(std::size_t v, double alpha, std::span<double> out) const;
  std::vector<double> dense(std::size_t v) const;

  /// Vertex maximizing <dir, v>; ties go to the lowest index. Serial reference.
  std::size_t argmax(std::span<const double> dir) const;

 private:
  std::size_t dim_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> index_;
  std::vector<double> value_;
};

/// The 16 deterministic local boxes as vectors in R^16.
VertexSet local_deterministic_vertex_set();
/// The 4096 time-ordered local vertices in R^256.
VertexSet tol_vertex_set();

struct GilbertOptions {
  double tol = 1e-7;
  std::size_t max_iters = 10000;
  bool away_steps = true;
  bool parallel_oracle = false;
};

struct GilbertResult {
  double distance_upper_bound = 0.0;
  std::size_t iterations = 0;
  bool inside = false;        ///< distance fell below tol
  bool inconclusive = false;  ///< budget exhausted
  /// Unit direction with max_v <dir, v> <= <dir, target> - margin.
  std::optional<std::vector<double>> separating_direction;
  double margin = 0.0;
  std::vector<double> nearest;         ///< current hull point
  std::vector<double> distance_trace;  ///< distance before every iteration
};

GilbertResult gilbert_distance(std::span<const double> target, const VertexSet& vertices,
                               const GilbertOptions& opts = {});

/// Gilbert membership of a box in the local polytope (independent of the CHSH test).
GilbertResult local_box_gilbert(const SingleStepBox& box, const GilbertOptions& opts = {});

/// Membership in the convex hull of the TOL vertices.
MembershipVerdict membership_TOL(const SequentialCorrelation& corr, const GilbertOptions& opts = {});

struct LocalityAgreement {
  std::size_t total = 0;
  std::size_t local = 0;
  std::size_t disagreements = 0;
  std::size_t inconclusive = 0;
};

/// is_local_box against Gilbert over the 16 deterministic vertices, box by box.
LocalityAgreement compare_locality_oracles(std::span<const SingleStepBox> boxes, double tol, const GilbertOptions& opts);

// ---------------------------------------------------------------------------------------------
// Hidden nonlocality

struct HiddenNonlocalityDemo {
  std::size_t d = 0;
  double mixing = 0.0;
  std::uint64_t seed = 0;
  double unfiltered_chsh = 0.0;          ///< seesaw optimum on the unfiltered state
  MembershipVerdict unfiltered_box;      ///< is_local_box of the seesaw-optimal unfiltered box
  double pass_probability = 0.0;         ///< both filters pass
  double post_filter_chsh = 0.0;         ///< seesaw optimum on the filtered state
  MembershipVerdict step1_box;           ///< first step of the sequential tensor
  double conditional_chsh = 0.0;         ///< largest CHSH value of the pass/pass conditional in the tensor
  MembershipVerdict sequential_Q;        ///< the sequential tensor against the local polytope
  SequentialCorrelation correlation{Scenario{}};
};

/// Werner state of dimension d with the given mixing, local rank-2 filters at step 1, and
/// seesaw-optimized CHSH measurements at step 2.
HiddenNonlocalityDemo hidden_nonlocality_demo(std::size_t d, double mixing, std::uint64_t seed);

/// Largest mixing for which the Werner state keeps a local model for projective
/// measurements: (d - 1) / d.
double werner_local_mixing(std::size_t d);

}  // namespace seqlocal
