#pragma once

#include <string>
#include <vector>

#include "seqlocal/correlation.hpp"
#include "seqlocal/quantum.hpp"

namespace seqlocal {

/// sum_xy (-1)^(xy) sum_ab a b p(ab|xy) with a, b = (-1)^index.
double standard_chsh(const SingleStepBox& box);

/// sum_xy sum_a p(a, b = (-1)^(xy) a | xy) = (4 + standard_chsh) / 2.
double rescaled_chsh(const SingleStepBox& box);

/// Two-step concatenated CHSH: rescaled selection at step 1 weighting the standard CHSH of
/// the step-2 conditional. Zero-probability histories contribute 0.
double concatenated_chsh(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// L-step concatenation: rescaled selection for steps 1..L-1, standard CHSH at step L.
/// Throws StructuralError if L does not match the scenario.
double concatenated_chsh_L(const SequentialCorrelation& corr, std::size_t L, double tol = kDefaultTol);

/// The same functional written as one linear form over the tensor entries. Expanding the
/// factorized sum gives p(a1..aL, b1..bL|x1..xL y1..yL) times (-1)^(xL yL) aL bL, restricted to
/// b_l = (-1)^(x_l y_l) a_l for l < L.
std::vector<double> witness_coefficients(const Scenario& scenario);
double concatenated_chsh_linear(const SequentialCorrelation& corr);

struct WitnessBounds {
  double local = 0.0;
  double qubit_projective = 0.0;
  double quantum = 0.0;
};

/// local = 2 * 3^(L-1); qubit_projective = 2 * 3^(L-2) * (sqrt2 + 2); quantum = 2 sqrt2 (sqrt2 + 2)^(L-1).
WitnessBounds bounds(std::size_t L);

enum class WitnessClass { Local, BeyondLocalWithinQubit, BeyondQubitWithinQuantum, SupraQuantum };

std::string to_string(WitnessClass c);
WitnessClass classify(double value, std::size_t L, double tol = kDefaultTol);

struct WitnessReport {
  double value = 0.0;
  std::size_t L = 0;
  WitnessBounds bounds;
  WitnessClass classification = WitnessClass::Local;
};

WitnessReport make_report(double value, std::size_t L);
/// Evaluates the factorized witness, cross-checked against the linear form.
WitnessReport evaluate_witness(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// CHSH-optimal observables on |Phi+>: Alice z and x, Bob (z + x)/sqrt2 and (z - x)/sqrt2.
std::array<std::array<double, 3>, 2> chsh_alice_bloch();
std::array<std::array<double, 3>, 2> chsh_bob_bloch();

/// Maximally entangled state of local dimension 2^L; step l measures the CHSH-optimal pair on
/// qubit factor l of each side. Supports L = 2, 3.
SequentialStrategy canonical_strategy(std::size_t L);

}  // namespace seqlocal
