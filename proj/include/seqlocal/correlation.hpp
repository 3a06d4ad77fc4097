#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqlocal/scenario.hpp"

namespace seqlocal {

/// One-time-step behavior p(ab|xy) in the 2-2-2 scenario, index a + 2b + 4x + 8y.
struct SingleStepBox {
  static constexpr std::size_t kSize = 16;

  std::array<double, kSize> p{};

  static constexpr std::size_t index(int a, int b, int x, int y) {
    return static_cast<std::size_t>(a + 2 * b + 4 * x + 8 * y);
  }
  double operator()(int a, int b, int x, int y) const { return p[index(a, b, x, y)]; }
  double& operator()(int a, int b, int x, int y) { return p[index(a, b, x, y)]; }

  static SingleStepBox uniform();
  static SingleStepBox mix(const SingleStepBox& u, const SingleStepBox& v, double lambda);

  friend bool operator==(const SingleStepBox&, const SingleStepBox&) = default;
};

/// Largest |sum_ab p(ab|xy) - 1| over the four setting pairs.
double normalization_residual(const SingleStepBox& box);
/// Largest dependence of Alice's marginal on y or Bob's marginal on x.
double signaling_residual(const SingleStepBox& box);
double max_abs_diff(const SingleStepBox& u, const SingleStepBox& v);

/// Dense sequential tensor p(a_1..a_L b_1..b_L | x_1..x_L y_1..y_L) in the Scenario layout.
class SequentialCorrelation {
 public:
  /// Throws StructuralError on a bad scenario or a length mismatch.
  SequentialCorrelation(Scenario scenario, std::vector<double> p);
  /// All-zero tensor for filling in place.
  explicit SequentialCorrelation(Scenario scenario);

  static SequentialCorrelation uniform(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  std::span<const double> values() const { return p_; }
  std::span<double> values() { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  double& operator[](std::size_t i) { return p_[i]; }

  /// Entry for per-step outcome/setting records (one StepRecord per step).
  double at(std::span<const StepRecord> record) const { return p_[index_of(record)]; }
  std::size_t index_of(std::span<const StepRecord> record) const;

  /// lambda * u + (1 - lambda) * v; scenarios must match.
  static SequentialCorrelation mix(const SequentialCorrelation& u, const SequentialCorrelation& v,
                                   double lambda);

  friend bool operator==(const SequentialCorrelation&, const SequentialCorrelation&) = default;

 private:
  Scenario scenario_;
  std::vector<double> p_;
};

double max_abs_diff(const SequentialCorrelation& u, const SequentialCorrelation& v);

struct ValidationReport {
  bool ok = false;
  double max_negativity = 0.0;              ///< largest -p over negative entries, 0 if none
  double max_normalization_residual = 0.0;  ///< largest |block sum - 1|
};

struct ConstraintReport {
  bool ok = false;
  double max_residual = 0.0;
  std::string worst;  ///< human-readable name of the constraint family with the largest residual
};

ValidationReport validate(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// Same-time-step no-signaling, every step and both parties: summing a party's outcome at
/// step l together with all later outcomes removes dependence on that party's setting at
/// step l and on all later settings.
ConstraintReport check_same_step_no_signaling(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// Marginals over steps > l are independent of settings at steps > l, for every l < L.
ConstraintReport check_arrow_of_time(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// Marginal onto the first `steps` steps, later settings fixed to 0.
SequentialCorrelation prefix_marginal(const SequentialCorrelation& corr, std::size_t steps);

/// Step-1 box p(a1 b1|x1 y1). Throws ConstraintViolation if the arrow of time fails beyond tol.
SingleStepBox first_step_marginal(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// Box of step history.length()+1 conditioned on `history`; std::nullopt marks a history whose
/// probability is below kZeroHistoryThreshold (the conditional is arbitrary there).
std::optional<SingleStepBox> conditional_box(const SequentialCorrelation& corr, const History& history,
                                             double tol = kDefaultTol);

/// Step-wise decomposition p = p_1(a1b1|x1y1) * prod_l p_l(a_l b_l | X^(l); x_l y_l).
struct Factorization {
  Scenario scenario;
  SingleStepBox first;
  /// Keyed by every history of length 1..L-1. nullopt marks a zero-probability history.
  std::map<History, std::optional<SingleStepBox>> conditionals;
};

Factorization factorize(const SequentialCorrelation& corr, double tol = kDefaultTol);

/// Inverse of factorize. Every history reachable with positive probability must map to a box;
/// missing or nullopt entries there throw StructuralError. Conditionals on unreachable histories
/// are ignored.
SequentialCorrelation compose(const SingleStepBox& first,
                              const std::map<History, std::optional<SingleStepBox>>& conditionals,
                              std::size_t steps = 2);
SequentialCorrelation compose(const SingleStepBox& first, const std::map<History, SingleStepBox>& conditionals,
                              std::size_t steps = 2);
SequentialCorrelation compose(const Factorization& f);

/// Largest signaling residual over the first box and every non-zero conditional. Composed
/// tensors satisfy same-step no-signaling exactly when this is within tolerance.
double factor_signaling_residual(const Factorization& f);

}  // namespace seqlocal
