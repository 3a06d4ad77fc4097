#include "seqlocal/parallel.hpp"

#include <omp.h>

#include <limits>

#include "seqlocal/errors.hpp"

namespace seqlocal::omp {

int max_threads() { return omp_get_max_threads(); }

SequentialCorrelation simulate(const SequentialStrategy& strategy) {
  strategy.check();
  SequentialCorrelation out(strategy.scenario);
  const int S = static_cast<int>(strategy.scenario.settings);
  const int O = static_cast<int>(strategy.scenario.outcomes);
  const int branches = S * S * O * O;
  // Branches write disjoint entries, so no synchronization is needed.
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < branches; ++k) {
    const int b = k % O;
    const int a = (k / O) % O;
    const int y = (k / (O * O)) % S;
    const int x = k / (O * O * S);
    detail::simulate_branch(strategy, {a, b, x, y}, out);
  }
  return out;
}

std::size_t argmax_vertex(const VertexSet& vertices, std::span<const double> dir) {
  const auto n = static_cast<std::ptrdiff_t>(vertices.size());
  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
#pragma omp parallel
  {
    std::size_t local = 0;
    double local_val = -std::numeric_limits<double>::infinity();
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t v = 0; v < n; ++v) {
      const double s = vertices.dot(static_cast<std::size_t>(v), dir);
      if (s > local_val) {
        local_val = s;
        local = static_cast<std::size_t>(v);
      }
    }
#pragma omp critical
    if (local_val > best_val || (local_val == best_val && local < best)) {
      best_val = local_val;
      best = local;
    }
  }
  return best;
}

QubitSampleReport sample_qubit_projective_strategies(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw StructuralError("need at least one sample");
  std::vector<double> values(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
    values[k] = qubit_sample_value(seed, static_cast<std::size_t>(k));
  QubitSampleReport r{n, seed, -std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < n; ++k)
    if (values[k] > r.max_value) {
      r.max_value = values[k];
      r.argmax = k;
    }
  return r;
}

LocalityAgreement compare_locality_oracles(std::span<const SingleStepBox> boxes, double tol, const GilbertOptions& opts) {
  LocalityAgreement out;
  out.total = boxes.size();
  std::size_t local = 0, disagreements = 0, inconclusive = 0;
#pragma omp parallel for schedule(dynamic, 32) reduction(+ : local, disagreements, inconclusive)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(boxes.size()); ++k) {
    const auto& box = boxes[k];
    const bool facet = is_local_box(box, tol).member;
    const auto g = local_box_gilbert(box, opts);
    if (g.inconclusive) {
      ++inconclusive;
      continue;
    }
    if (facet) ++local;
    if (facet != g.inside) ++disagreements;
  }
  out.local = local;
  out.disagreements = disagreements;
  out.inconclusive = inconclusive;
  return out;
}

std::vector<MembershipVerdict> membership_Q_batch(std::span<const SequentialCorrelation> batch, double tol) {
  std::vector<MembershipVerdict> out(batch.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(batch.size()); ++k) out[k] = membership_Q(batch[k], tol);
  return out;
}

}  // namespace seqlocal::omp
