#include "seqlocal/quantum.hpp"

#include <cmath>

#include "seqlocal/errors.hpp"

namespace seqlocal {

namespace {

constexpr double kStateTol = 1e-12;
constexpr double kPositivityTol = 1e-10;

void require(bool cond, const std::string& what) {
  if (!cond) throw StructuralError(what);
}

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}

// Column vector k of a matrix.
std::vector<Complex> column(const ComplexMatrix& m, std::size_t k) {
  std::vector<Complex> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, k);
  return v;
}

void check_shape(const std::vector<std::vector<ComplexMatrix>>& ops, const char* what) {
  require(!ops.empty() && !ops.front().empty(), std::string(what) + " has no settings or outcomes");
  const std::size_t outcomes = ops.front().size();
  const std::size_t d = ops.front().front().rows();
  for (const auto& per_setting : ops) {
    require(per_setting.size() == outcomes, std::string(what) + " has ragged outcome lists");
    for (const auto& m : per_setting) {
      require(m.rows() == d && m.cols() == d && d > 0, std::string(what) + " operators must be square and equal-sized");
      require(m.all_finite(), std::string(what) + " has non-finite entries");
    }
  }
}

void descend(const SequentialStrategy& s, std::vector<StepRecord>& rec, const ComplexMatrix& sigma,
             SequentialCorrelation& out) {
  const std::size_t level = rec.size();
  const History h(rec);
  const int S = static_cast<int>(s.scenario.settings);
  const int O = static_cast<int>(s.scenario.outcomes);
  if (level + 1 == s.scenario.steps) {
    const auto& pa = s.alice.final_step.at(h);
    const auto& pb = s.bob.final_step.at(h);
    for (int x = 0; x < S; ++x)
      for (int y = 0; y < S; ++y)
        for (int a = 0; a < O; ++a)
          for (int b = 0; b < O; ++b) {
            rec.push_back({a, b, x, y});
            const auto ef = tensor_product(pa.effects[x][a], pb.effects[y][b]);
            out[out.index_of(rec)] = real_trace_of_product(ef, sigma);
            rec.pop_back();
          }
    return;
  }
  const auto& ia = s.alice.instruments[level].at(h);
  const auto& ib = s.bob.instruments[level].at(h);
  for (int x = 0; x < S; ++x)
    for (int y = 0; y < S; ++y)
      for (int a = 0; a < O; ++a)
        for (int b = 0; b < O; ++b) {
          const auto kl = tensor_product(ia.ops[x][a], ib.ops[y][b]);
          rec.push_back({a, b, x, y});
          descend(s, rec, kl * sigma * kl.adjoint(), out);
          rec.pop_back();
        }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  require(m_.square() && m_.rows() >= 1, "density matrix must be square and non-empty");
  require(m_.all_finite(), "density matrix has non-finite entries");
  require(m_.is_hermitian(kStateTol), "density matrix is not Hermitian");
  require(std::abs(m_.trace() - Complex(1.0)) <= kStateTol, "density matrix trace is not 1");
  const auto e = hermitian_eig(m_);
  require(e.values.back() >= -kPositivityTol, "density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(std::span<const Complex> psi) {
  double norm = 0.0;
  for (const auto& z : psi) norm += std::norm(z);
  require(norm > 0.0, "zero state vector");
  auto m = ComplexMatrix::outer(psi, psi);
  m *= 1.0 / norm;
  return DensityMatrix(std::move(m));
}

std::size_t Povm::dim() const { return effects.empty() || effects.front().empty() ? 0 : effects.front().front().rows(); }

void Povm::check(double tol) const {
  check_shape(effects, "POVM");
  const std::size_t d = dim();
  for (const auto& per_setting : effects) {
    ComplexMatrix sum(d, d);
    for (const auto& e : per_setting) {
      require(e.is_hermitian(tol), "POVM effect is not Hermitian");
      require(hermitian_eig(e).values.back() >= -tol, "POVM effect is not positive");
      sum += e;
    }
    require(max_abs_diff(sum, ComplexMatrix::identity(d)) <= tol, "POVM effects do not sum to the identity");
  }
}

std::size_t KrausInstrument::dim() const { return ops.empty() || ops.front().empty() ? 0 : ops.front().front().rows(); }

void KrausInstrument::check(double tol) const {
  check_shape(ops, "instrument");
  const std::size_t d = dim();
  for (const auto& per_setting : ops) {
    ComplexMatrix sum(d, d);
    for (const auto& k : per_setting) sum += k.adjoint() * k;
    require(max_abs_diff(sum, ComplexMatrix::identity(d)) <= tol, "instrument violates completeness");
  }
}

Povm KrausInstrument::effects() const {
  Povm p;
  for (const auto& per_setting : ops) {
    auto& out = p.effects.emplace_back();
    for (const auto& k : per_setting) out.push_back(k.adjoint() * k);
  }
  return p;
}

void SequentialStrategy::check() const {
  scenario.check();
  require(dim_a >= 1 && dim_b >= 1, "local dimensions must be positive");
  require(state.dim() == dim_a * dim_b, "state dimension does not match dim_a * dim_b");
  const std::size_t L = scenario.steps;
  for (const auto* party : {&alice, &bob}) {
    const std::size_t d = party == &alice ? dim_a : dim_b;
    const std::string who = party == &alice ? "Alice" : "Bob";
    require(party->instruments.size() == L - 1, who + " needs instruments for " + std::to_string(L - 1) + " steps");
    for (std::size_t l = 0; l + 1 < L; ++l) {
      const auto& per_history = party->instruments[l];
      const auto histories = History::all(scenario, l);
      require(per_history.size() == histories.size(), who + "'s step-" + std::to_string(l + 1) + " instruments are not total over histories");
      for (const auto& h : histories) {
        const auto it = per_history.find(h);
        require(it != per_history.end(), who + " has no step-" + std::to_string(l + 1) + " instrument for history '" + h.key() + "'");
        it->second.check();
        require(it->second.dim() == d, who + "'s instrument has the wrong dimension");
        require(it->second.settings() == scenario.settings && it->second.outcomes() == scenario.outcomes,
                who + "'s instrument does not match the scenario's settings/outcomes");
      }
    }
    const auto histories = History::all(scenario, L - 1);
    require(party->final_step.size() == histories.size(), who + "'s final-step effects are not total over histories");
    for (const auto& h : histories) {
      const auto it = party->final_step.find(h);
      require(it != party->final_step.end(), who + " has no final-step effects for history '" + h.key() + "'");
      it->second.check();
      require(it->second.dim() == d, who + "'s effects have the wrong dimension");
      require(it->second.settings() == scenario.settings && it->second.outcomes() == scenario.outcomes,
              who + "'s effects do not match the scenario's settings/outcomes");
    }
  }
}

DensityMatrix maximally_entangled_state(std::size_t d) {
  require(d >= 2, "maximally entangled state needs d >= 2");
  std::vector<Complex> psi(d * d);
  for (std::size_t i = 0; i < d; ++i) psi[i * d + i] = 1.0;
  return DensityMatrix::from_pure(psi);
}

DensityMatrix werner_state(std::size_t d, double mixing) {
  require(d >= 2, "Werner state needs d >= 2");
  require(mixing >= 0.0 && mixing <= 1.0, "Werner mixing must lie in [0, 1]");
  const std::size_t n = d * d;
  ComplexMatrix m(n, n);
  const double anti = mixing / static_cast<double>(d * (d - 1));
  const double noise = (1.0 - mixing) / static_cast<double>(n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // (1 - F) on |ij>: diagonal 1, swap entry -1; 1 - F vanishes on |ii>.
      m(i * d + j, i * d + j) += noise + (i == j ? 0.0 : anti);
      if (i != j) m(i * d + j, j * d + i) -= anti;
    }
  return DensityMatrix(std::move(m));
}

std::array<ComplexMatrix, 2> qubit_projectors(const std::array<double, 3>& n) {
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  require(std::abs(norm - 1.0) <= 1e-10, "Bloch vector must have unit length");
  const auto obs = pauli_x() * n[0] + pauli_y() * n[1] + pauli_z() * n[2];
  const auto id = ComplexMatrix::identity(2);
  return {(id + obs) * 0.5, (id - obs) * 0.5};
}

KrausInstrument projective_qubit_instrument(const std::vector<std::array<double, 3>>& bloch_vectors) {
  require(!bloch_vectors.empty(), "instrument needs at least one setting");
  KrausInstrument inst;
  for (const auto& n : bloch_vectors) {
    auto [plus, minus] = qubit_projectors(n);
    inst.ops.push_back({plus, minus});
  }
  return inst;
}

KrausInstrument local_filter_instrument(const ComplexMatrix& projector, std::size_t settings) {
  require(projector.square(), "filter must be square");
  require(max_abs_diff(projector * projector, projector) <= 1e-10 && projector.is_hermitian(1e-10),
          "filter must be an orthogonal projector");
  const auto rest = ComplexMatrix::identity(projector.rows()) - projector;
  KrausInstrument inst;
  for (std::size_t s = 0; s < settings; ++s) inst.ops.push_back({projector, rest});
  return inst;
}

ComplexMatrix embed_operator(const ComplexMatrix& op, std::size_t position, std::size_t count) {
  require(position < count, "embedding position out of range");
  const auto id = ComplexMatrix::identity(op.rows());
  ComplexMatrix out = position == 0 ? op : id;
  for (std::size_t k = 1; k < count; ++k) out = tensor_product(out, k == position ? op : id);
  return out;
}

KrausInstrument embed_instrument(const KrausInstrument& inst, std::size_t position, std::size_t count) {
  KrausInstrument out;
  for (const auto& per_setting : inst.ops) {
    auto& dst = out.ops.emplace_back();
    for (const auto& k : per_setting) dst.push_back(embed_operator(k, position, count));
  }
  return out;
}

Povm embed_povm(const Povm& povm, std::size_t position, std::size_t count) {
  Povm out;
  for (const auto& per_setting : povm.effects) {
    auto& dst = out.effects.emplace_back();
    for (const auto& e : per_setting) dst.push_back(embed_operator(e, position, count));
  }
  return out;
}

PartyProtocol history_independent_protocol(const Scenario& scenario, const std::vector<KrausInstrument>& steps,
                                           const Povm& last) {
  require(steps.size() + 1 == scenario.steps, "need one instrument per step before the last");
  PartyProtocol p;
  for (std::size_t l = 0; l < steps.size(); ++l) {
    auto& m = p.instruments.emplace_back();
    for (const auto& h : History::all(scenario, l)) m.emplace(h, steps[l]);
  }
  for (const auto& h : History::all(scenario, scenario.steps - 1)) p.final_step.emplace(h, last);
  return p;
}

namespace detail {

void simulate_branch(const SequentialStrategy& s, const StepRecord& first, SequentialCorrelation& out) {
  const auto& rho = s.state.matrix();
  if (s.scenario.steps == 1) {
    const History none;
    const auto& e = s.alice.final_step.at(none).effects[first.x][first.a];
    const auto& f = s.bob.final_step.at(none).effects[first.y][first.b];
    const std::array<StepRecord, 1> rec{first};
    out[out.index_of(rec)] = real_trace_of_product(tensor_product(e, f), rho);
    return;
  }
  const History none;
  const auto& k = s.alice.instruments[0].at(none).ops[first.x][first.a];
  const auto& l = s.bob.instruments[0].at(none).ops[first.y][first.b];
  const auto kl = tensor_product(k, l);
  std::vector<StepRecord> rec{first};
  descend(s, rec, kl * rho * kl.adjoint(), out);
}

}  // namespace detail

SequentialCorrelation simulate(const SequentialStrategy& strategy) {
  strategy.check();
  SequentialCorrelation out(strategy.scenario);
  const int S = static_cast<int>(strategy.scenario.settings);
  const int O = static_cast<int>(strategy.scenario.outcomes);
  for (int x = 0; x < S; ++x)
    for (int y = 0; y < S; ++y)
      for (int a = 0; a < O; ++a)
        for (int b = 0; b < O; ++b) detail::simulate_branch(strategy, {a, b, x, y}, out);
  return out;
}

std::optional<DensityMatrix> conditional_post_state(const DensityMatrix& state, const ComplexMatrix& kraus_a,
                                                    const ComplexMatrix& kraus_b) {
  const auto kl = tensor_product(kraus_a, kraus_b);
  require(kl.cols() == state.dim(), "Kraus operators do not match the state dimension");
  auto post = kl * state.matrix() * kl.adjoint();
  const double tr = post.trace().real();
  if (tr < kZeroHistoryThreshold) return std::nullopt;
  post *= 1.0 / tr;
  // Enforce exact Hermiticity lost to rounding.
  post = (post + post.adjoint()) * 0.5;
  return DensityMatrix(std::move(post));
}

ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  auto g = gaussian_matrix(d, d, rng);
  // Modified Gram-Schmidt on the columns.
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) dot += std::conj(g(i, j)) * g(i, k);
      for (std::size_t i = 0; i < d; ++i) g(i, k) -= dot * g(i, j);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) norm += std::norm(g(i, k));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) g(i, k) /= norm;
  }
  return g;
}

std::vector<Complex> random_pure_vector(std::size_t d, Rng& rng) {
  std::vector<Complex> v(d);
  double norm = 0.0;
  for (auto& z : v) {
    z = Complex(rng.normal(), rng.normal());
    norm += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(norm);
  return v;
}

DensityMatrix random_density_matrix(std::size_t d, Rng& rng) {
  // Ginibre ensemble with a random rank, so pure and full-rank states both appear.
  const std::size_t rank = 1 + rng.below(d);
  const auto g = gaussian_matrix(d, rank, rng);
  auto m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  m = (m + m.adjoint()) * 0.5;
  return DensityMatrix(std::move(m));
}

std::array<double, 3> random_bloch_vector(Rng& rng) {
  std::array<double, 3> n{rng.normal(), rng.normal(), rng.normal()};
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  for (auto& c : n) c /= norm;
  return n;
}

KrausInstrument random_instrument(std::size_t d, std::size_t settings, std::size_t outcomes, Rng& rng) {
  require(d >= outcomes, "random instrument needs d >= outcomes");
  KrausInstrument inst;
  for (std::size_t s = 0; s < settings; ++s) {
    const auto u = random_unitary(d, rng);
    const auto w = random_unitary(d, rng);
    std::vector<ComplexMatrix> proj(outcomes, ComplexMatrix(d, d));
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t a = i < outcomes ? i : rng.below(outcomes);
      const auto col = column(u, i);
      proj[a] += ComplexMatrix::outer(col, col);
    }
    auto& ops = inst.ops.emplace_back();
    for (auto& p : proj) ops.push_back(w * p);
  }
  return inst;
}

Povm random_povm(std::size_t d, std::size_t settings, std::size_t outcomes, Rng& rng) {
  Povm povm;
  for (std::size_t s = 0; s < settings; ++s) {
    // E_k = S^{-1/2} A_k S^{-1/2} with random positive A_k and S = sum_k A_k.
    std::vector<ComplexMatrix> a;
    ComplexMatrix sum(d, d);
    for (std::size_t k = 0; k < outcomes; ++k) {
      const auto g = gaussian_matrix(d, d, rng);
      a.push_back(g * g.adjoint());
      sum += a.back();
    }
    auto e = hermitian_eig(sum);
    for (auto& v : e.values) v = 1.0 / std::sqrt(v);
    const auto inv_sqrt = reconstruct(e);
    auto& effects = povm.effects.emplace_back();
    ComplexMatrix acc(d, d);
    for (std::size_t k = 0; k + 1 < outcomes; ++k) {
      auto ek = inv_sqrt * a[k] * inv_sqrt;
      ek = (ek + ek.adjoint()) * 0.5;
      acc += ek;
      effects.push_back(std::move(ek));
    }
    // Last effect closes the completeness relation exactly.
    effects.push_back(ComplexMatrix::identity(d) - acc);
  }
  return povm;
}

SequentialStrategy random_strategy(const Scenario& scenario, std::size_t dim_a, std::size_t dim_b, Rng& rng) {
  SequentialStrategy s;
  s.scenario = scenario;
  s.dim_a = dim_a;
  s.dim_b = dim_b;
  s.state = random_density_matrix(dim_a * dim_b, rng);
  for (auto* party : {&s.alice, &s.bob}) {
    const std::size_t d = party == &s.alice ? dim_a : dim_b;
    for (std::size_t l = 0; l + 1 < scenario.steps; ++l) {
      auto& m = party->instruments.emplace_back();
      for (const auto& h : History::all(scenario, l)) m.emplace(h, random_instrument(d, scenario.settings, scenario.outcomes, rng));
    }
    for (const auto& h : History::all(scenario, scenario.steps - 1)) {
      // Alternate projective and generic POVM endings.
      party->final_step.emplace(h, rng.below(2) ? random_instrument(d, scenario.settings, scenario.outcomes, rng).effects()
                                                : random_povm(d, scenario.settings, scenario.outcomes, rng));
    }
  }
  return s;
}

}  // namespace seqlocal
