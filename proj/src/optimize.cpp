#include "seqlocal/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "seqlocal/errors.hpp"
#include "seqlocal/parallel.hpp"
#include "seqlocal/witness.hpp"

namespace seqlocal {

namespace {

constexpr std::array<std::array<double, 2>, 2> kChshSign{{{1.0, 1.0}, {1.0, -1.0}}};
constexpr std::size_t kMaxLocalDim = 8;
// Separation has to beat rounding in <d, t> - max <d, v>.
constexpr double kSeparationEps = 1e-12;

ComplexMatrix random_observable(std::size_t d, Rng& rng) {
  const auto u = random_unitary(d, rng);
  ComplexMatrix diag(d, d);
  // Mixed signs: a start at +-1 is a fixed point of the seesaw map.
  for (std::size_t i = 0; i < d; ++i) diag(i, i) = i % 2 == 0 ? 1.0 : -1.0;
  if (d % 2 == 1 && rng.below(2)) diag(d - 1, d - 1) = -1.0;
  return u * diag * u.adjoint();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

ComplexMatrix top_projector(const ComplexMatrix& reduced) {
  const auto e = hermitian_eig(reduced);
  std::vector<Complex> v(reduced.rows());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = e.vectors(i, 0);
  return ComplexMatrix::outer(v, v);
}

Povm projector_povm(const ComplexMatrix& p, std::size_t settings) {
  Povm out;
  const auto rest = ComplexMatrix::identity(p.rows()) - p;
  for (std::size_t s = 0; s < settings; ++s) out.effects.push_back({p, rest});
  return out;
}

double norm(std::span<const double> v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

}  // namespace

// ---------------------------------------------------------------------------------------------

double chsh_of_observables(const DensityMatrix& state, const std::array<ComplexMatrix, 2>& alice,
                           const std::array<ComplexMatrix, 2>& bob) {
  double total = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      total += kChshSign[x][y] * real_trace_of_product(tensor_product(alice[x], bob[y]), state.matrix());
  return total;
}

KrausInstrument observable_instrument(const std::array<ComplexMatrix, 2>& observables) {
  KrausInstrument out;
  for (const auto& a : observables) {
    const auto id = ComplexMatrix::identity(a.rows());
    out.ops.push_back({(id + a) * 0.5, (id - a) * 0.5});
  }
  return out;
}

SeesawResult seesaw_chsh(const DensityMatrix& state, std::array<std::size_t, 2> dims, const SeesawOptions& opts) {
  const auto [da, db] = dims;
  if (da == 0 || db == 0 || da > kMaxLocalDim || db > kMaxLocalDim)
    throw StructuralError("seesaw needs local dimensions in [1, 8]");
  if (da * db != state.dim()) throw StructuralError("local dimensions do not match the state");

  Rng rng(opts.seed);
  SeesawResult r;
  r.bob = {random_observable(db, rng), random_observable(db, rng)};
  const auto& rho = state.matrix();
  const auto ia = ComplexMatrix::identity(da);
  const auto ib = ComplexMatrix::identity(db);

  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    r.iterations = it + 1;
    double value = 0.0;
    for (int x = 0; x < 2; ++x) {
      const auto b = r.bob[0] * kChshSign[x][0] + r.bob[1] * kChshSign[x][1];
      const auto m = hermitian_part(partial_trace(rho * tensor_product(ia, b), dims, Subsystem::B));
      r.alice[x] = matrix_sign(m);
      value += real_trace_of_product(r.alice[x], m);
    }
    r.trajectory.push_back(value);
    value = 0.0;
    for (int y = 0; y < 2; ++y) {
      const auto a = r.alice[0] * kChshSign[0][y] + r.alice[1] * kChshSign[1][y];
      const auto m = hermitian_part(partial_trace(rho * tensor_product(a, ib), dims, Subsystem::A));
      r.bob[y] = matrix_sign(m);
      value += real_trace_of_product(r.bob[y], m);
    }
    r.trajectory.push_back(value);
    r.value = value;
    if (value - prev < opts.tol) break;
    prev = value;
  }
  return r;
}

// ---------------------------------------------------------------------------------------------

SequentialStrategy random_qubit_projective_strategy(Rng& rng) {
  SequentialStrategy s;
  s.scenario = Scenario{2, 2, 2};
  s.dim_a = 2;
  s.dim_b = 2;
  s.state = DensityMatrix::from_pure(random_pure_vector(4, rng));
  const History none;
  for (auto* party : {&s.alice, &s.bob}) {
    party->instruments.emplace_back().emplace(
        none, projective_qubit_instrument({random_bloch_vector(rng), random_bloch_vector(rng)}));
    for (const auto& h : History::all(s.scenario, 1))
      party->final_step.emplace(
          h, projective_qubit_instrument({random_bloch_vector(rng), random_bloch_vector(rng)}).effects());
  }
  return s;
}

double qubit_sample_value(std::uint64_t seed, std::size_t k) {
  auto rng = Rng(seed).split(k);
  return concatenated_chsh(simulate(random_qubit_projective_strategy(rng)));
}

QubitSampleReport sample_qubit_projective_strategies(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw StructuralError("need at least one sample");
  QubitSampleReport r{n, seed, -std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < n; ++k) {
    const double v = qubit_sample_value(seed, k);
    if (v > r.max_value) {
      r.max_value = v;
      r.argmax = k;
    }
  }
  return r;
}

SequentialStrategy seesaw_tuned_qubit_strategy(std::uint64_t seed) {
  const auto phi = maximally_entangled_state(2);
  const auto opt = seesaw_chsh(phi, {2, 2}, {.seed = seed});
  SequentialStrategy s;
  s.scenario = Scenario{2, 2, 2};
  s.dim_a = 2;
  s.dim_b = 2;
  s.state = phi;
  const auto ia = observable_instrument(opt.alice);
  const auto ib = observable_instrument(opt.bob);
  const History none;
  s.alice.instruments.emplace_back().emplace(none, ia);
  s.bob.instruments.emplace_back().emplace(none, ib);
  for (const auto& h : History::all(s.scenario, 1)) {
    const auto& r = h[0];
    const auto post = conditional_post_state(phi, ia.ops[r.x][r.a], ib.ops[r.y][r.b]);
    if (!post) {
      s.alice.final_step.emplace(h, projector_povm(ComplexMatrix::identity(2), 2));
      s.bob.final_step.emplace(h, projector_povm(ComplexMatrix::identity(2), 2));
      continue;
    }
    // The post-measurement state is a product; measuring onto it gives a = b = 0 for every
    // setting pair, i.e. the local CHSH maximum 2.
    s.alice.final_step.emplace(h, projector_povm(top_projector(partial_trace(post->matrix(), {2, 2}, Subsystem::B)), 2));
    s.bob.final_step.emplace(h, projector_povm(top_projector(partial_trace(post->matrix(), {2, 2}, Subsystem::A)), 2));
  }
  return s;
}

// ---------------------------------------------------------------------------------------------

void VertexSet::add(std::span<const std::pair<std::uint32_t, double>> entries) {
  for (const auto& [i, v] : entries) {
    if (i >= dim_) throw StructuralError("vertex coordinate out of range");
    index_.push_back(i);
    value_.push_back(v);
  }
  offsets_.push_back(index_.size());
}

void VertexSet::add_dense(std::span<const double> v) {
  if (v.size() != dim_) throw StructuralError("vertex has the wrong dimension");
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) entries.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  add(entries);
}

double VertexSet::dot(std::size_t v, std::span<const double> dir) const {
  double s = 0.0;
  for (std::size_t k = offsets_[v]; k < offsets_[v + 1]; ++k) s += value_[k] * dir[index_[k]];
  return s;
}

void VertexSet::axpy(std::size_t v, double alpha, std::span<double> out) const {
  for (std::size_t k = offsets_[v]; k < offsets_[v + 1]; ++k) out[index_[k]] += alpha * value_[k];
}

std::vector<double> VertexSet::dense(std::size_t v) const {
  std::vector<double> out(dim_, 0.0);
  axpy(v, 1.0, out);
  return out;
}

std::size_t VertexSet::argmax(std::span<const double> dir) const {
  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < size(); ++v) {
    const double s = dot(v, dir);
    if (s > best_val) {
      best_val = s;
      best = v;
    }
  }
  return best;
}

VertexSet local_deterministic_vertex_set() {
  VertexSet set(16);
  for (int id = 0; id < kNumDeterministicVertices; ++id) set.add_dense(BoxVertex::from_id(id).box.p);
  return set;
}

VertexSet tol_vertex_set() {
  VertexSet set(Scenario{}.size());
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (const auto& support : tol_vertex_supports()) {
    entries.clear();
    for (auto i : support) entries.emplace_back(i, 1.0);
    set.add(entries);
  }
  return set;
}

GilbertResult gilbert_distance(std::span<const double> target, const VertexSet& vertices, const GilbertOptions& opts) {
  if (target.size() != vertices.dim()) throw StructuralError("target dimension does not match the vertex set");
  if (vertices.size() == 0) throw StructuralError("empty vertex set");
  const std::size_t n = target.size();
  const auto oracle = [&](std::span<const double> dir) {
    return opts.parallel_oracle ? omp::argmax_vertex(vertices, dir) : vertices.argmax(dir);
  };

  // Start at the nearest vertex.
  std::size_t start = 0;
  double start_dist = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    auto diff = vertices.dense(v);
    for (std::size_t i = 0; i < n; ++i) diff[i] -= target[i];
    const double dist = norm(diff);
    if (dist < start_dist) {
      start_dist = dist;
      start = v;
    }
  }

  std::map<std::size_t, double> weights{{start, 1.0}};
  std::vector<double> x(n), d(n), dir(n);
  GilbertResult r;
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    r.iterations = it + 1;
    std::fill(x.begin(), x.end(), 0.0);
    for (const auto& [v, w] : weights) vertices.axpy(v, w, x);
    for (std::size_t i = 0; i < n; ++i) d[i] = target[i] - x[i];
    const double dist = norm(d);
    r.distance_trace.push_back(dist);
    r.distance_upper_bound = dist;
    if (dist < opts.tol) {
      r.inside = true;
      r.nearest = x;
      return r;
    }

    // Any d with max_v <d, v> < <d, t> separates; keep the best one and stop once it brackets
    // the distance within tol, so the certificate approaches the nearest-point direction.
    const std::size_t s = oracle(d);
    const double d_t = std::inner_product(d.begin(), d.end(), target.begin(), 0.0);
    const double d_s = vertices.dot(s, d);
    const double margin = (d_t - d_s) / dist;
    if (margin > kSeparationEps && margin > r.margin) {
      for (std::size_t i = 0; i < n; ++i) dir[i] = d[i] / dist;
      r.separating_direction = dir;
      r.margin = margin;
    }
    if (r.separating_direction && dist - r.margin <= opts.tol) {
      r.nearest = x;
      return r;
    }

    const double d_x = std::inner_product(d.begin(), d.end(), x.begin(), 0.0);
    const double fw_gap = d_s - d_x;
    std::size_t away = start;
    double away_gap = -1.0;
    if (opts.away_steps && weights.size() > 1) {
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& [v, w] : weights) {
        const double dv = vertices.dot(v, d);
        if (dv < worst) {
          worst = dv;
          away = v;
        }
      }
      away_gap = d_x - worst;
    }

    // Exact line search along D: gamma = <d, D> / |D|^2.
    std::vector<double> step(n);
    double gamma_max = 1.0;
    const bool use_away = away_gap > fw_gap;
    if (use_away) {
      const double wu = weights.at(away);
      gamma_max = wu / (1.0 - wu);
      std::copy(x.begin(), x.end(), step.begin());
      vertices.axpy(away, -1.0, step);
    } else {
      for (std::size_t i = 0; i < n; ++i) step[i] = -x[i];
      vertices.axpy(s, 1.0, step);
    }
    const double dd = std::inner_product(step.begin(), step.end(), step.begin(), 0.0);
    if (dd == 0.0) continue;
    const double gamma = std::clamp(std::inner_product(d.begin(), d.end(), step.begin(), 0.0) / dd, 0.0, gamma_max);

    if (use_away) {
      for (auto& [v, w] : weights) w *= 1.0 + gamma;
      if (gamma >= gamma_max) {
        weights.erase(away);
      } else {
        weights[away] -= gamma;
      }
    } else {
      for (auto& [v, w] : weights) w *= 1.0 - gamma;
      weights[s] += gamma;
      if (gamma >= 1.0) weights = {{s, 1.0}};
    }
    std::erase_if(weights, [](const auto& kv) { return kv.second <= 0.0; });
  }
  // A certificate found along the way is still valid; only a budget without one is inconclusive.
  r.inconclusive = !r.separating_direction;
  r.nearest = x;
  return r;
}

GilbertResult local_box_gilbert(const SingleStepBox& box, const GilbertOptions& opts) {
  static const VertexSet vertices = local_deterministic_vertex_set();
  return gilbert_distance(box.p, vertices, opts);
}

MembershipVerdict membership_TOL(const SequentialCorrelation& corr, const GilbertOptions& opts) {
  if (corr.scenario() != Scenario{}) throw StructuralError("TOL membership is implemented for (2,2,2,2)");
  auto p = membership_P(corr, opts.tol);
  if (!p.member) return p;
  static const VertexSet vertices = tol_vertex_set();
  const auto g = gilbert_distance(corr.values(), vertices, opts);
  MembershipVerdict v;
  v.member = g.inside;
  v.inconclusive = g.inconclusive;
  if (g.separating_direction) {
    v.violated = "separated from the TOL hull";
    v.margin = g.margin;
  } else if (g.inconclusive) {
    v.violated = "iteration budget exhausted";
    v.margin = g.distance_upper_bound;
  }
  return v;
}

LocalityAgreement compare_locality_oracles(std::span<const SingleStepBox> boxes, double tol, const GilbertOptions& opts) {
  LocalityAgreement out;
  for (const auto& box : boxes) {
    const bool facet = is_local_box(box, tol).member;
    const auto g = local_box_gilbert(box, opts);
    ++out.total;
    if (g.inconclusive) {
      ++out.inconclusive;
      continue;
    }
    if (facet) ++out.local;
    if (facet != g.inside) ++out.disagreements;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------

double werner_local_mixing(std::size_t d) {
  if (d < 2) throw StructuralError("Werner states need d >= 2");
  return static_cast<double>(d - 1) / static_cast<double>(d);
}

HiddenNonlocalityDemo hidden_nonlocality_demo(std::size_t d, double mixing, std::uint64_t seed) {
  if (d < 3 || d > kMaxLocalDim) throw StructuralError("the filter demo needs 3 <= d <= 8");
  if (!(mixing >= 0.0 && mixing <= 1.0)) throw StructuralError("mixing must lie in [0, 1]");
  constexpr int kRestarts = 4;
  const std::array<std::size_t, 2> dims{d, d};
  const auto best_seesaw = [&](const DensityMatrix& rho) {
    SeesawResult best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kRestarts; ++k) {
      auto r = seesaw_chsh(rho, dims, {.seed = Rng(seed).split(k).next_u64()});
      if (r.value > best.value) best = std::move(r);
    }
    return best;
  };

  HiddenNonlocalityDemo demo;
  demo.d = d;
  demo.mixing = mixing;
  demo.seed = seed;
  const auto rho = werner_state(d, mixing);

  // Plain Bell test on the unfiltered state.
  const auto plain = best_seesaw(rho);
  demo.unfiltered_chsh = plain.value;
  {
    const auto ia = observable_instrument(plain.alice).effects();
    const auto ib = observable_instrument(plain.bob).effects();
    SingleStepBox box;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            box.p[SingleStepBox::index(a, b, x, y)] =
                real_trace_of_product(tensor_product(ia.effects[x][a], ib.effects[y][b]), rho.matrix());
    demo.unfiltered_box = is_local_box(box, 1e-9);
  }

  // Rank-2 filter onto span{|0>, |1>}.
  ComplexMatrix filter(d, d);
  filter(0, 0) = 1.0;
  filter(1, 1) = 1.0;
  const auto filtered = conditional_post_state(rho, filter, filter);
  if (!filtered) throw ConstraintViolation("filter never passes", 0.0);
  demo.pass_probability = real_trace_of_product(tensor_product(filter, filter), rho.matrix());
  const auto tuned = best_seesaw(*filtered);
  demo.post_filter_chsh = tuned.value;

  SequentialStrategy s;
  s.scenario = Scenario{2, 2, 2};
  s.dim_a = d;
  s.dim_b = d;
  s.state = rho;
  const History none;
  s.alice.instruments.emplace_back().emplace(none, local_filter_instrument(filter));
  s.bob.instruments.emplace_back().emplace(none, local_filter_instrument(filter));
  const auto fa = observable_instrument(tuned.alice).effects();
  const auto fb = observable_instrument(tuned.bob).effects();
  for (const auto& h : History::all(s.scenario, 1)) {
    s.alice.final_step.emplace(h, fa);
    s.bob.final_step.emplace(h, fb);
  }
  demo.correlation = simulate(s);
  demo.step1_box = is_local_box(first_step_marginal(demo.correlation), 1e-9);
  if (const auto c = conditional_box(demo.correlation, History(0, 0, 0, 0))) {
    const auto v = chsh_values(*c);
    demo.conditional_chsh = *std::max_element(v.begin(), v.end());
  }
  demo.sequential_Q = membership_Q(demo.correlation, 1e-9);
  return demo;
}

}  // namespace seqlocal
