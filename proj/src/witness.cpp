#include "seqlocal/witness.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "seqlocal/errors.hpp"

namespace seqlocal {

namespace {

int sign_of(int outcome_index) { return outcome_index == 0 ? 1 : -1; }

// b index selected by the rescaled form: b = (-1)^(xy) a.
int selected_b(int a, int x, int y) { return a ^ (x & y); }

// sum over the rescaled selection of `box`, each term weighted by `inner(a, b, x, y)`.
double rescaled_weighted(const SingleStepBox& box, const std::function<double(const StepRecord&)>& inner) {
  double total = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a) {
        const StepRecord r{a, selected_b(a, x, y), x, y};
        const double w = box(r.a, r.b, x, y);
        if (w == 0.0) continue;
        total += w * inner(r);
      }
  return total;
}

}  // namespace

double standard_chsh(const SingleStepBox& box) {
  double s = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const int sxy = (x & y) ? -1 : 1;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s += sxy * sign_of(a) * sign_of(b) * box(a, b, x, y);
    }
  return s;
}

double rescaled_chsh(const SingleStepBox& box) {
  return rescaled_weighted(box, [](const StepRecord&) { return 1.0; });
}

double concatenated_chsh(const SequentialCorrelation& corr, double tol) {
  if (corr.scenario().steps != 2) throw StructuralError("concatenated_chsh needs a two-step tensor");
  return concatenated_chsh_L(corr, 2, tol);
}

double concatenated_chsh_L(const SequentialCorrelation& corr, std::size_t L, double tol) {
  const auto& sc = corr.scenario();
  if (sc.steps != L) throw StructuralError("witness length does not match the tensor's number of steps");
  if (!sc.is_binary()) throw StructuralError("witness needs 2 settings and 2 outcomes per step");
  if (L < 2) throw StructuralError("the concatenated witness needs L >= 2");
  const auto f = factorize(corr, tol);

  std::function<double(const History&)> nested = [&](const History& h) -> double {
    const auto& box = f.conditionals.at(h);
    if (!box) return 0.0;
    if (h.length() + 1 == L) return standard_chsh(*box);
    return rescaled_weighted(*box, [&](const StepRecord& r) { return nested(h.extended(r)); });
  };
  return rescaled_weighted(f.first, [&](const StepRecord& r) { return nested(History({r})); });
}

std::vector<double> witness_coefficients(const Scenario& sc) {
  if (!sc.is_binary() || sc.steps < 2) throw StructuralError("witness needs a 2-2-2 scenario with L >= 2");
  const SequentialCorrelation probe(sc);
  std::vector<double> c(sc.size(), 0.0);
  std::vector<StepRecord> rec(sc.steps);
  const std::size_t L = sc.steps;
  // Enumerate every record; keep the ones matching the rescaled selection before step L.
  const std::size_t per_step = 16;
  std::size_t total = 1;
  for (std::size_t l = 0; l < L; ++l) total *= per_step;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    bool selected = true;
    for (std::size_t l = 0; l < L; ++l) {
      const int v = static_cast<int>(rest % per_step);
      rest /= per_step;
      rec[l] = {v & 1, (v >> 1) & 1, (v >> 2) & 1, (v >> 3) & 1};
      if (l + 1 < L && rec[l].b != selected_b(rec[l].a, rec[l].x, rec[l].y)) selected = false;
    }
    if (!selected) continue;
    const auto& last = rec.back();
    c[probe.index_of(rec)] = ((last.x & last.y) ? -1.0 : 1.0) * sign_of(last.a) * sign_of(last.b);
  }
  return c;
}

double concatenated_chsh_linear(const SequentialCorrelation& corr) {
  const auto c = witness_coefficients(corr.scenario());
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * corr[i];
  return s;
}

WitnessBounds bounds(std::size_t L) {
  if (L < 2) throw StructuralError("witness bounds need L >= 2");
  const double l = static_cast<double>(L);
  const double r2 = std::numbers::sqrt2;
  return {2.0 * std::pow(3.0, l - 1.0), 2.0 * std::pow(3.0, l - 2.0) * (r2 + 2.0),
          2.0 * r2 * std::pow(r2 + 2.0, l - 1.0)};
}

std::string to_string(WitnessClass c) {
  switch (c) {
    case WitnessClass::Local: return "local";
    case WitnessClass::BeyondLocalWithinQubit: return "beyond-local-within-qubit";
    case WitnessClass::BeyondQubitWithinQuantum: return "beyond-qubit-within-quantum";
    case WitnessClass::SupraQuantum: return "supra-quantum";
  }
  return "unknown";
}

WitnessClass classify(double value, std::size_t L, double tol) {
  const auto b = bounds(L);
  if (value <= b.local + tol) return WitnessClass::Local;
  if (value <= b.qubit_projective + tol) return WitnessClass::BeyondLocalWithinQubit;
  if (value <= b.quantum + tol) return WitnessClass::BeyondQubitWithinQuantum;
  return WitnessClass::SupraQuantum;
}

WitnessReport make_report(double value, std::size_t L) {
  return {value, L, bounds(L), classify(value, L)};
}

WitnessReport evaluate_witness(const SequentialCorrelation& corr, double tol) {
  const std::size_t L = corr.scenario().steps;
  const double factorized = concatenated_chsh_L(corr, L, tol);
  const double linear = concatenated_chsh_linear(corr);
  // Both routes sum the same entries; they differ only by rounding and by the dropped
  // zero-probability histories.
  if (std::abs(factorized - linear) > 1e-8) {
    throw ConstraintViolation("factorized and linear witness disagree", std::abs(factorized - linear));
  }
  return make_report(factorized, L);
}

std::array<std::array<double, 3>, 2> chsh_alice_bloch() { return {{{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}}}; }

std::array<std::array<double, 3>, 2> chsh_bob_bloch() {
  const double h = 1.0 / std::numbers::sqrt2;
  return {{{h, 0.0, h}, {-h, 0.0, h}}};
}

SequentialStrategy canonical_strategy(std::size_t L) {
  if (L < 2 || L > 3) throw StructuralError("canonical strategy supports L = 2 or 3");
  const std::size_t d = std::size_t{1} << L;
  SequentialStrategy s;
  s.scenario = Scenario{L, 2, 2};
  s.dim_a = d;
  s.dim_b = d;
  s.state = maximally_entangled_state(d);
  const auto alice_bloch = chsh_alice_bloch();
  const auto bob_bloch = chsh_bob_bloch();
  const auto alice_qubit = projective_qubit_instrument({alice_bloch[0], alice_bloch[1]});
  const auto bob_qubit = projective_qubit_instrument({bob_bloch[0], bob_bloch[1]});
  std::vector<KrausInstrument> alice_steps;
  std::vector<KrausInstrument> bob_steps;
  for (std::size_t l = 0; l + 1 < L; ++l) {
    alice_steps.push_back(embed_instrument(alice_qubit, l, L));
    bob_steps.push_back(embed_instrument(bob_qubit, l, L));
  }
  s.alice = history_independent_protocol(s.scenario, alice_steps, embed_povm(alice_qubit.effects(), L - 1, L));
  s.bob = history_independent_protocol(s.scenario, bob_steps, embed_povm(bob_qubit.effects(), L - 1, L));
  return s;
}

}  // namespace seqlocal
