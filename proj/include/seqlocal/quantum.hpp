#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "seqlocal/correlation.hpp"
#include "seqlocal/linalg.hpp"
#include "seqlocal/rng.hpp"
#include "seqlocal/scenario.hpp"

namespace seqlocal {

/// Hermitian, unit-trace, positive semidefinite operator. A default-constructed value is
/// empty (dimension 0) and is rejected wherever a state is required.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Throws StructuralError unless Hermitian and unit trace within 1e-12 with eigenvalues >= -1e-10.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix from_pure(std::span<const Complex> psi);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Effects per setting and outcome, [setting][outcome]; each setting sums to the identity.
struct Povm {
  std::vector<std::vector<ComplexMatrix>> effects;

  std::size_t dim() const;
  std::size_t settings() const { return effects.size(); }
  std::size_t outcomes() const { return effects.empty() ? 0 : effects.front().size(); }
  /// Throws StructuralError on ragged shapes, non-Hermitian or non-positive effects, or
  /// incompleteness beyond tol.
  void check(double tol = 1e-10) const;
};

/// Kraus operators per setting and outcome, [setting][outcome]; sum_a K^dagger K = 1 per setting.
struct KrausInstrument {
  std::vector<std::vector<ComplexMatrix>> ops;

  std::size_t dim() const;
  std::size_t settings() const { return ops.size(); }
  std::size_t outcomes() const { return ops.empty() ? 0 : ops.front().size(); }
  void check(double tol = 1e-10) const;
  Povm effects() const;
};

/// One party's measurements through the sequence. Step l < L uses an instrument chosen by
/// the full cross-party history X^(l) (both parties' earlier settings and outcomes); the last
/// step only needs effects. Step-1 entries are keyed by the empty history.
struct PartyProtocol {
  std::vector<std::map<History, KrausInstrument>> instruments;  ///< steps 1..L-1
  std::map<History, Povm> final_step;                           ///< keyed by length L-1 histories
};

struct SequentialStrategy {
  Scenario scenario;
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  DensityMatrix state;
  PartyProtocol alice;
  PartyProtocol bob;

  /// Dimensional consistency, completeness of every instrument/POVM, and totality over
  /// every history. Throws StructuralError.
  void check() const;
};

/// (1/sqrt d) sum_i |ii> as a density matrix on C^d (x) C^d.
DensityMatrix maximally_entangled_state(std::size_t d);

/// mixing * 2 P_anti / (d^2 - d) + (1 - mixing) I / d^2.
DensityMatrix werner_state(std::size_t d, double mixing);

/// Kraus operators are the projectors (1 +- n.sigma)/2, outcome 0 <-> eigenvalue +1.
KrausInstrument projective_qubit_instrument(const std::vector<std::array<double, 3>>& bloch_vectors);
std::array<ComplexMatrix, 2> qubit_projectors(const std::array<double, 3>& bloch);

/// Two-outcome instrument {P, 1 - P} for every setting; outcome 0 means the filter passed.
KrausInstrument local_filter_instrument(const ComplexMatrix& projector, std::size_t settings = 2);

/// 1 (x) ... (x) op (x) ... (x) 1 with `op` on factor `position` of `count` equal factors.
ComplexMatrix embed_operator(const ComplexMatrix& op, std::size_t position, std::size_t count);

/// Lift every Kraus operator (or effect) through embed_operator.
KrausInstrument embed_instrument(const KrausInstrument& inst, std::size_t position, std::size_t count);
Povm embed_povm(const Povm& povm, std::size_t position, std::size_t count);

/// Protocol that uses the same instruments/effects after every history.
PartyProtocol history_independent_protocol(const Scenario& scenario, const std::vector<KrausInstrument>& steps,
                                           const Povm& last);

/// Born-rule statistics of the sequence. Serial reference; see parallel.hpp for the OpenMP kernel.
SequentialCorrelation simulate(const SequentialStrategy& strategy);

/// (K (x) L) rho (K (x) L)^dagger / tr(...), or nullopt when the trace is below 1e-12.
std::optional<DensityMatrix> conditional_post_state(const DensityMatrix& state, const ComplexMatrix& kraus_a,
                                                    const ComplexMatrix& kraus_b);

// Random objects for tests and sampling.
ComplexMatrix random_unitary(std::size_t d, Rng& rng);
std::vector<Complex> random_pure_vector(std::size_t d, Rng& rng);
DensityMatrix random_density_matrix(std::size_t d, Rng& rng);
std::array<double, 3> random_bloch_vector(Rng& rng);
/// Projective instrument in a random basis with every outcome getting at least one vector
/// (d >= outcomes), followed by a random unitary on the post-measurement state.
KrausInstrument random_instrument(std::size_t d, std::size_t settings, std::size_t outcomes, Rng& rng);
/// Two-outcome-style POVM with random spectra in random bases.
Povm random_povm(std::size_t d, std::size_t settings, std::size_t outcomes, Rng& rng);

/// Random strategy with history-dependent measurements at every step after the first.
SequentialStrategy random_strategy(const Scenario& scenario, std::size_t dim_a, std::size_t dim_b, Rng& rng);

namespace detail {
/// Fills every tensor entry whose step-1 record is `first`. Branches with different
/// `first` write disjoint entries.
void simulate_branch(const SequentialStrategy& strategy, const StepRecord& first, SequentialCorrelation& out);
}  // namespace detail

}  // namespace seqlocal
