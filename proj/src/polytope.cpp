#include "seqlocal/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "seqlocal/detail/slots.hpp"
#include "seqlocal/errors.hpp"

namespace seqlocal {

namespace {

int bit(int word, int pos) { return (word >> pos) & 1; }

std::vector<BoxVertex> build_vertices() {
  std::vector<BoxVertex> v;
  v.reserve(kNumBoxVertices);
  for (int id = 0; id < kNumBoxVertices; ++id) v.push_back(BoxVertex::from_id(id));
  return v;
}

// Histories (a, b, x, y) on which a box puts positive weight.
std::vector<History> support_histories(const SingleStepBox& box) {
  std::vector<History> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          if (box(a, b, x, y) > 0.0) out.emplace_back(a, b, x, y);
  return out;
}

std::optional<int> match_vertex(const SingleStepBox& box, double tol) {
  for (const auto& v : single_step_vertices()) {
    if (max_abs_diff(box, v.box) <= tol) return v.id;
  }
  return std::nullopt;
}

void require_two_step_binary(const Scenario& s, const char* op) {
  if (!(s == Scenario{2, 2, 2})) throw StructuralError(std::string(op) + " supports only the two-step 2-2-2 scenario");
}

}  // namespace

BoxVertex BoxVertex::from_id(int id) {
  if (id < 0 || id >= kNumBoxVertices) throw StructuralError("box vertex id out of range: " + std::to_string(id));
  BoxVertex v;
  v.id = id;
  if (id < kNumDeterministicVertices) {
    v.kind = VertexKind::Deterministic;
    v.f = id / 4;
    v.g = id % 4;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) v.box(bit(v.f, x), bit(v.g, y), x, y) = 1.0;
  } else {
    v.kind = VertexKind::PRVariant;
    const int k = id - kNumDeterministicVertices;
    v.alpha = bit(k, 2);
    v.beta = bit(k, 1);
    v.gamma = bit(k, 0);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a) {
          const int b = a ^ (x & y) ^ (v.alpha & x) ^ (v.beta & y) ^ v.gamma;
          v.box(a, b, x, y) = 0.5;
        }
  }
  return v;
}

const std::vector<BoxVertex>& single_step_vertices() {
  static const std::vector<BoxVertex> catalog = build_vertices();
  return catalog;
}

void ExtremePointSpec::check() const {
  const auto first_vertex = BoxVertex::from_id(first);
  const auto support = support_histories(first_vertex.box);
  for (const auto& h : support) {
    const auto it = per_history.find(h);
    if (it == per_history.end()) throw StructuralError("extreme point spec misses history '" + h.key() + "'");
    BoxVertex::from_id(it->second);
  }
  if (per_history.size() != support.size()) {
    throw StructuralError("extreme point spec lists histories the first vertex never reaches");
  }
}

std::array<int, 4> chsh_pattern(int k) {
  static constexpr std::array<int, 8> kMasks{1, 2, 4, 7, 8, 11, 13, 14};
  const int mask = kMasks.at(static_cast<std::size_t>(k));
  return {bit(mask, 0) ? -1 : 1, bit(mask, 1) ? -1 : 1, bit(mask, 2) ? -1 : 1, bit(mask, 3) ? -1 : 1};
}

std::string chsh_pattern_name(int k) {
  std::string s;
  for (int sign : chsh_pattern(k)) s += sign > 0 ? '+' : '-';
  return s;
}

std::array<double, 8> chsh_values(const SingleStepBox& box) {
  std::array<double, 4> corr{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      corr[2 * x + y] = box(0, 0, x, y) + box(1, 1, x, y) - box(0, 1, x, y) - box(1, 0, x, y);
  std::array<double, 8> out{};
  for (int k = 0; k < 8; ++k) {
    const auto s = chsh_pattern(k);
    out[k] = s[0] * corr[0] + s[1] * corr[1] + s[2] * corr[2] + s[3] * corr[3];
  }
  return out;
}

MembershipVerdict is_no_signaling_box(const SingleStepBox& box, double tol) {
  MembershipVerdict v;
  const double neg = -*std::min_element(box.p.begin(), box.p.end());
  const double norm = normalization_residual(box);
  const double sig = signaling_residual(box);
  v.margin = std::max({neg, norm, sig});
  v.member = v.margin <= tol;
  if (!v.member) {
    v.violated = neg == v.margin ? "positivity" : norm == v.margin ? "normalization" : "no-signaling";
  }
  return v;
}

MembershipVerdict is_local_box(const SingleStepBox& box, double tol) {
  const double norm = normalization_residual(box);
  if (norm > tol) throw StructuralError("box is not normalized (residual " + std::to_string(norm) + ")");
  MembershipVerdict v;
  const double neg = -*std::min_element(box.p.begin(), box.p.end());
  if (neg > tol) {
    v.margin = neg;
    v.violated = "positivity";
    return v;
  }
  // The CHSH facets are complete only inside the no-signaling subspace.
  const double sig = signaling_residual(box);
  if (sig > tol) {
    v.margin = sig;
    v.violated = "no-signaling";
    return v;
  }
  const auto values = chsh_values(box);
  const auto worst = std::max_element(values.begin(), values.end());
  v.margin = *worst - 2.0;
  v.member = v.margin <= tol;
  if (!v.member) v.violated = "CHSH " + chsh_pattern_name(static_cast<int>(worst - values.begin()));
  return v;
}

std::size_t matrix_rank(std::vector<std::vector<double>> rows, std::size_t cols, double pivot_tol) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t best = rank;
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (std::abs(rows[r][c]) > std::abs(rows[best][c])) best = r;
    }
    if (std::abs(rows[best][c]) <= pivot_tol) continue;
    std::swap(rows[rank], rows[best]);
    const auto& piv = rows[rank];
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const double f = rows[r][c] / piv[c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * piv[k];
    }
    ++rank;
  }
  return rank;
}

std::size_t single_step_active_rank(const SingleStepBox& box, double tol) {
  std::vector<std::vector<double>> rows;
  auto row = [] { return std::vector<double>(SingleStepBox::kSize, 0.0); };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      auto r = row();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) r[SingleStepBox::index(a, b, x, y)] = 1.0;
      rows.push_back(r);
    }
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      auto r = row();
      for (int b = 0; b < 2; ++b) {
        r[SingleStepBox::index(a, b, x, 0)] += 1.0;
        r[SingleStepBox::index(a, b, x, 1)] -= 1.0;
      }
      rows.push_back(r);
    }
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < 2; ++b) {
      auto r = row();
      for (int a = 0; a < 2; ++a) {
        r[SingleStepBox::index(a, b, 0, y)] += 1.0;
        r[SingleStepBox::index(a, b, 1, y)] -= 1.0;
      }
      rows.push_back(r);
    }
  for (std::size_t i = 0; i < SingleStepBox::kSize; ++i) {
    if (box.p[i] <= tol) {
      auto r = row();
      r[i] = 1.0;
      rows.push_back(r);
    }
  }
  return matrix_rank(std::move(rows), SingleStepBox::kSize);
}

std::vector<std::vector<std::pair<std::size_t, double>>> equality_rows(const Scenario& sc) {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  const std::size_t ob = sc.outcome_blocks();
  const std::size_t sb = sc.setting_blocks();
  for (std::size_t s = 0; s < sb; ++s) {
    std::vector<std::pair<std::size_t, double>> r;
    for (std::size_t o = 0; o < ob; ++o) r.emplace_back(o + ob * s, 1.0);
    rows.push_back(std::move(r));
  }
  const detail::SlotLayout layout(sc);
  auto families = detail::no_signaling_families(sc);
  for (auto& f : detail::arrow_of_time_families(sc)) families.push_back(std::move(f));
  for (const auto& f : families) {
    std::map<std::size_t, std::vector<std::size_t>> groups;  // reduced outcome -> outcomes summed into it
    for (std::size_t o = 0; o < ob; ++o) groups[layout.zero_out(o, f.summed)].push_back(o);
    for (std::size_t s = 0; s < sb; ++s) {
      const std::size_t ref = layout.zero_set(s, f.varying);
      if (ref == s) continue;
      for (const auto& [reduced, members] : groups) {
        std::vector<std::pair<std::size_t, double>> r;
        for (auto o : members) {
          r.emplace_back(o + ob * s, 1.0);
          r.emplace_back(o + ob * ref, -1.0);
        }
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

SequentialCorrelation compose_extreme_point(const ExtremePointSpec& spec) {
  spec.check();
  std::map<History, SingleStepBox> conditionals;
  for (const auto& [h, id] : spec.per_history) conditionals.emplace(h, BoxVertex::from_id(id).box);
  return compose(BoxVertex::from_id(spec.first).box, conditionals, 2);
}

ExtremalityCertificate is_extreme_in_P(const SequentialCorrelation& corr, double tol) {
  const auto verdict = membership_P(corr, tol);
  if (!verdict.member) throw ConstraintViolation("tensor is not in P: " + verdict.violated.value_or(""), verdict.margin);
  if (!corr.scenario().is_binary()) throw StructuralError("extremality test needs a 2-2-2 scenario per step");

  ExtremalityCertificate cert;
  cert.ambient = corr.size();

  // Structural route: every factor of the step-wise decomposition is a vertex.
  const auto f = factorize(corr, tol);
  const auto first = match_vertex(f.first, tol);
  bool structural = first.has_value();
  ExtremePointSpec spec;
  if (first) spec.first = *first;
  for (const auto& [h, box] : f.conditionals) {
    if (!structural) break;
    if (!box) continue;
    const auto id = match_vertex(*box, tol);
    if (!id) {
      structural = false;
      break;
    }
    if (h.length() == 1) spec.per_history.emplace(h, *id);
  }
  cert.structural = structural;
  if (structural && corr.scenario().steps == 2) cert.spec = spec;

  // Rank route. Unit rows pin the tight columns, so
  // rank([E; I_Z]) = |Z| + rank(E restricted to the free columns).
  std::vector<std::size_t> free_cols;
  std::vector<std::size_t> col_of(corr.size(), SIZE_MAX);
  for (std::size_t i = 0; i < corr.size(); ++i) {
    if (corr[i] > tol) {
      col_of[i] = free_cols.size();
      free_cols.push_back(i);
    }
  }
  std::vector<std::vector<double>> dense;
  for (const auto& row : equality_rows(corr.scenario())) {
    std::vector<double> r(free_cols.size(), 0.0);
    bool any = false;
    for (const auto& [i, c] : row) {
      if (col_of[i] != SIZE_MAX) {
        r[col_of[i]] += c;
        any = true;
      }
    }
    if (any) dense.push_back(std::move(r));
  }
  cert.rank = (corr.size() - free_cols.size()) + matrix_rank(std::move(dense), free_cols.size());
  return cert;
}

MembershipVerdict membership_P(const SequentialCorrelation& corr, double tol) {
  MembershipVerdict v;
  const auto val = validate(corr, tol);
  const auto aot = check_arrow_of_time(corr, tol);
  const auto ns = check_same_step_no_signaling(corr, tol);
  const std::array<std::pair<double, std::string>, 4> parts{{
      {val.max_negativity, "positivity"},
      {val.max_normalization_residual, "normalization"},
      {aot.max_residual, "arrow of time: " + aot.worst},
      {ns.max_residual, "same-step no-signaling: " + ns.worst},
  }};
  const auto worst = std::max_element(parts.begin(), parts.end(),
                                      [](const auto& l, const auto& r) { return l.first < r.first; });
  v.margin = worst->first;
  v.member = v.margin <= tol;
  if (!v.member) v.violated = worst->second;
  return v;
}

MembershipVerdict membership_Q(const SequentialCorrelation& corr, double tol) {
  auto v = membership_P(corr, tol);
  if (!v.member) return v;
  if (!corr.scenario().is_binary()) throw StructuralError("membership_Q needs a 2-2-2 scenario per step");
  const auto f = factorize(corr, tol);
  auto check = [&](const SingleStepBox& box, const std::string& where) {
    // Conditionals inherit the tensor's tolerance scaled by 1/p(history); local boxes are
    // judged on the normalized box with the caller's tol.
    const auto local = is_local_box(box, std::max(tol, normalization_residual(box)));
    v.margin = std::max(v.margin, local.margin);
    if (!local.member && v.member) {
      v.member = false;
      v.violated = where + ": " + local.violated.value_or("");
    }
  };
  check(f.first, "step 1");
  for (const auto& [h, box] : f.conditionals) {
    if (box) check(*box, "history " + h.key());
  }
  if (v.member) v.violated.reset();
  return v;
}

std::uint64_t count_extreme_points(const Scenario& scenario) {
  require_two_step_binary(scenario, "count_extreme_points");
  auto ipow = [](std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
  };
  return 16 * ipow(24, 4) + 8 * ipow(24, 8);
}

std::vector<std::array<std::uint32_t, 16>> tol_vertex_supports() {
  const Scenario sc{2, 2, 2};
  const SequentialCorrelation probe(sc);
  std::vector<std::array<std::uint32_t, 16>> out;
  out.reserve(4096);
  for (int alice = 0; alice < 64; ++alice) {
    for (int bob = 0; bob < 64; ++bob) {
      std::array<std::uint32_t, 16> support{};
      std::size_t k = 0;
      for (int y2 = 0; y2 < 2; ++y2)
        for (int x2 = 0; x2 < 2; ++x2)
          for (int y1 = 0; y1 < 2; ++y1)
            for (int x1 = 0; x1 < 2; ++x1) {
              const StepRecord r1{bit(alice % 4, x1), bit(bob % 4, y1), x1, y1};
              const StepRecord r2{bit(alice / 4, x1 + 2 * x2), bit(bob / 4, y1 + 2 * y2), x2, y2};
              const std::array<StepRecord, 2> rec{r1, r2};
              support[k++] = static_cast<std::uint32_t>(probe.index_of(rec));
            }
      out.push_back(support);
    }
  }
  return out;
}

std::vector<SequentialCorrelation> tol_vertices() {
  std::vector<SequentialCorrelation> out;
  out.reserve(4096);
  for (const auto& support : tol_vertex_supports()) {
    SequentialCorrelation c(Scenario{2, 2, 2});
    for (auto i : support) c[i] = 1.0;
    out.push_back(std::move(c));
  }
  return out;
}

ExtremePointSpec random_extreme_point_spec(Rng& rng, bool deterministic_only) {
  const std::uint64_t range = deterministic_only ? kNumDeterministicVertices : kNumBoxVertices;
  ExtremePointSpec spec;
  spec.first = static_cast<int>(rng.below(range));
  for (const auto& h : support_histories(BoxVertex::from_id(spec.first).box)) {
    spec.per_history.emplace(h, static_cast<int>(rng.below(range)));
  }
  return spec;
}

SequentialCorrelation sample_Q(std::uint64_t seed, std::size_t n) {
  if (n < 1) throw StructuralError("sample size must be at least 1");
  Rng rng(seed);
  const auto w = rng.dirichlet(n);
  SequentialCorrelation out(Scenario{2, 2, 2});
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = compose_extreme_point(random_extreme_point_spec(rng, true));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[k] * v[i];
  }
  return out;
}

SequentialCorrelation sample_TOL(std::uint64_t seed, std::size_t n) {
  if (n < 1) throw StructuralError("sample size must be at least 1");
  Rng rng(seed);
  const auto w = rng.dirichlet(n);
  const auto supports = tol_vertex_supports();
  SequentialCorrelation out(Scenario{2, 2, 2});
  for (std::size_t k = 0; k < n; ++k) {
    for (auto i : supports[rng.below(supports.size())]) out[i] += w[k];
  }
  return out;
}

}  // namespace seqlocal
