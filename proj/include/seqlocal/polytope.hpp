#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqlocal/correlation.hpp"
#include "seqlocal/rng.hpp"

namespace seqlocal {

enum class VertexKind { Deterministic, PRVariant };

/// A vertex of the 2-2-2 no-signaling polytope.
///
/// Ids: deterministic id = 4 f + g where f = a(x=0) + 2 a(x=1) and g = b(y=0) + 2 b(y=1);
/// PR variants id = 16 + 4 alpha + 2 beta + gamma with p(ab|xy) = 1/2 iff
/// a xor b = xy xor alpha x xor beta y xor gamma.
struct BoxVertex {
  int id = 0;
  VertexKind kind = VertexKind::Deterministic;
  int f = 0;
  int g = 0;
  int alpha = 0;
  int beta = 0;
  int gamma = 0;
  SingleStepBox box;

  static BoxVertex from_id(int id);
};

inline constexpr int kNumBoxVertices = 24;
inline constexpr int kNumDeterministicVertices = 16;

/// The 24 vertices, in id order.
const std::vector<BoxVertex>& single_step_vertices();

/// Two-step extreme point: a first vertex plus one vertex per history the first reaches.
struct ExtremePointSpec {
  int first = 0;
  std::map<History, int> per_history;

  /// Throws StructuralError unless per_history covers exactly the non-zero histories of `first`.
  void check() const;
};

struct MembershipVerdict {
  bool member = false;
  std::optional<std::string> violated;
  /// Largest excess over the relevant bound; > tol whenever member is false.
  double margin = 0.0;
  /// Set when a numerical search ran out of budget; `member` is false then.
  bool inconclusive = false;
};

/// Sign pattern of CHSH relabeling k in [0, 8): the k-th s in {+-1}^4 (order s00 s01 s10 s11,
/// bit set = -1, ascending mask) with s00 s01 s10 s11 = -1.
std::array<int, 4> chsh_pattern(int k);
std::string chsh_pattern_name(int k);
/// Pattern index of the standard form E00 + E01 + E10 - E11.
inline constexpr int kStandardChshPattern = 4;

/// sum_xy s_xy E_xy for the 8 relabelings, E_xy = sum_ab (-1)^(a+b) p(ab|xy).
std::array<double, 8> chsh_values(const SingleStepBox& box);

/// Local (LHV) membership in the 2-2-2 scenario: positivity, no-signaling and all eight CHSH
/// values <= 2. Throws StructuralError if the box is not normalized within tol.
MembershipVerdict is_local_box(const SingleStepBox& box, double tol = kDefaultTol);
MembershipVerdict is_no_signaling_box(const SingleStepBox& box, double tol = kDefaultTol);

/// Rank of the active constraints (normalization, no-signaling, tight positivity) at `box`.
/// Equals 16 exactly at the vertices of the no-signaling polytope.
std::size_t single_step_active_rank(const SingleStepBox& box, double tol = kDefaultTol);

SequentialCorrelation compose_extreme_point(const ExtremePointSpec& spec);

struct ExtremalityCertificate {
  bool structural = false;  ///< every factor is one of the 24 vertices
  std::size_t rank = 0;     ///< rank of equality rows plus tight positivity rows
  std::size_t ambient = 0;  ///< number of tensor entries
  std::optional<ExtremePointSpec> spec;  ///< recovered vertex ids when structural (two steps)

  bool rank_full() const { return rank == ambient; }
  bool extreme() const { return structural && rank_full(); }
  bool consistent() const { return structural == rank_full(); }
};

/// Extremality in the spatio-temporal polytope by two independent routes. Throws
/// ConstraintViolation if the tensor is not a member of P.
ExtremalityCertificate is_extreme_in_P(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// Positivity, normalization, arrow of time and same-step no-signaling.
MembershipVerdict membership_P(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// P-membership plus locality of the first-step box and of every conditional box on a
/// non-zero history, at every step.
MembershipVerdict membership_Q(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// Number of extreme points of the two-step 2-2-2 spatio-temporal polytope.
/// Throws StructuralError for any other scenario.
std::uint64_t count_extreme_points(const Scenario& scenario);

/// Deterministic time-ordered local vertices: per party a step-1 response x1 -> a1 and a
/// step-2 response (x1, x2) -> a2, 64 per party, 4096 in total. Vertex id = 64 * alice + bob
/// with party index = r1 + 4 r2, r1 = a1(0) + 2 a1(1), r2 = sum_{x1 x2} a2(x1,x2) 2^(x1 + 2 x2).
std::vector<SequentialCorrelation> tol_vertices();
/// Support of each TOL vertex: one unit entry per setting block.
std::vector<std::array<std::uint32_t, 16>> tol_vertex_supports();

ExtremePointSpec random_extreme_point_spec(Rng& rng, bool deterministic_only);

/// Dirichlet mixture of n all-deterministic extreme points (resp. TOL vertices).
SequentialCorrelation sample_Q(std::uint64_t seed, std::size_t n);
SequentialCorrelation sample_TOL(std::uint64_t seed, std::size_t n);

/// Row-echelon rank with partial pivoting; entries below `pivot_tol` count as zero.
std::size_t matrix_rank(std::vector<std::vector<double>> rows, std::size_t cols, double pivot_tol = 1e-8);

/// Equality rows of P for the scenario: normalization, arrow of time and same-step
/// no-signaling, each as a sparse coefficient row over tensor entries.
std::vector<std::vector<std::pair<std::size_t, double>>> equality_rows(const Scenario& scenario);

}  // namespace seqlocal
