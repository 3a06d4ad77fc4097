// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "seqlocal/optimize.hpp"
#include "seqlocal/parallel.hpp"
#include "seqlocal/polytope.hpp"
#include "seqlocal/witness.hpp"

using namespace seqlocal;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s -- %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome canonical_saturation(std::size_t L, double expected, double limit) {
  const auto t0 = Clock::now();
  const double value = evaluate_witness(simulate(canonical_strategy(L))).value;
  const double t = seconds_since(t0);
  const double err = std::abs(value - expected);
  return {err <= 1e-9 && t < limit, fmt("value %.10f, |error| %.2e, %.3f s (limit %.0f s)", value, err, t, limit)};
}

bool has_pr_factor(const ExtremePointSpec& spec) {
  if (spec.first >= 16) return true;
  for (const auto& [h, id] : spec.per_history)
    if (id >= 16) return true;
  return false;
}

}  // namespace

int main() {
  const double s2 = std::sqrt(2.0);

  criterion(1, "L=2 quantum bound saturation", [&] { return canonical_saturation(2, 4.0 + 4.0 * s2, 1.0); });
  criterion(2, "L=3 quantum bound saturation", [&] { return canonical_saturation(3, 16.0 + 12.0 * s2, 10.0); });

  criterion(3, "qubit-projective ceiling", [&] {
    const auto t0 = Clock::now();
    const double ceiling = 2.0 * (s2 + 2.0);
    const auto report = omp::sample_qubit_projective_strategies(10000, 2024);
    const double tuned = concatenated_chsh(simulate(seesaw_tuned_qubit_strategy(2024)));
    const double t = seconds_since(t0);
    const bool ok = report.n == 10000 && report.max_value <= ceiling + 1e-9 && tuned >= ceiling - 1e-6 && t < 60.0;
    return Outcome{ok, fmt("max sampled %.10f, seesaw-tuned %.10f, ceiling %.10f, %.2f s", report.max_value, tuned,
                           ceiling, t)};
  });

  criterion(4, "Tsirelson via seesaw on |Phi+>", [&] {
    const auto phi = maximally_entangled_state(2);
    double worst_err = 0.0, slowest = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SeesawOptions opts;
      opts.seed = seed;
      const auto t0 = Clock::now();
      const auto r = seesaw_chsh(phi, {2, 2}, opts);
      slowest = std::max(slowest, seconds_since(t0));
      worst_err = std::max(worst_err, std::abs(r.value - 2.0 * s2));
    }
    return Outcome{worst_err <= 1e-6 && slowest < 0.1,
                   fmt("20 seeds, worst |value - 2 sqrt 2| %.2e, slowest %.4f s", worst_err, slowest)};
  });

  criterion(5, "extreme-point certificates", [&] {
    const auto t0 = Clock::now();
    std::size_t vertex_ok = 0;
    for (const auto& v : single_step_vertices())
      if (single_step_active_rank(v.box) == 16) ++vertex_ok;
    Rng rng(5);
    std::size_t member = 0, extreme = 0, agree = 0;
    for (int k = 0; k < 100; ++k) {
      const auto corr = compose_extreme_point(random_extreme_point_spec(rng, false));
      if (membership_P(corr, 0.0).member) ++member;
      const auto cert = is_extreme_in_P(corr);
      if (cert.extreme() && cert.ambient == 256) ++extreme;
      if (cert.consistent()) ++agree;
    }
    const double t = seconds_since(t0);
    return Outcome{vertex_ok == 24 && member == 100 && extreme == 100 && agree == 100 && t < 30.0,
                   fmt("vertices rank 16: %zu/24; specs in P (tol 0): %zu/100; extreme: %zu/100; "
                       "certificates agree: %zu/100",
                       vertex_ok, member, extreme, agree)};
  });

  criterion(6, "extreme-point count", [&] {
    const auto n = count_extreme_points(Scenario{});
    return Outcome{n == 880607821824ULL, fmt("%llu", static_cast<unsigned long long>(n))};
  });

  criterion(7, "local-polytope oracle agreement", [&] {
    const auto t0 = Clock::now();
    Rng rng(7);
    std::vector<SingleStepBox> boxes;
    boxes.reserve(10000);
    for (int k = 0; k < 10000; ++k)
      boxes.push_back(k % 2 == 0 ? oracle::random_ns_box(rng) : oracle::random_boundary_box(rng));
    GilbertOptions opts;
    opts.tol = 1e-7;
    const auto agreement = omp::compare_locality_oracles(boxes, 1e-7, opts);
    const double t = seconds_since(t0);
    return Outcome{agreement.disagreements == 0 && agreement.inconclusive == 0 && agreement.total == 10000 && t < 120.0,
                   fmt("%zu boxes (%zu local), %zu disagreements, %zu inconclusive", agreement.total, agreement.local,
                       agreement.disagreements, agreement.inconclusive)};
  });

  criterion(8, "Q-membership behavior", [&] {
    const auto t0 = Clock::now();
    std::vector<SequentialCorrelation> samples;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) samples.push_back(sample_Q(seed, 1 + seed % 8));
    std::size_t accepted = 0;
    for (const auto& v : omp::membership_Q_batch(samples))
      if (v.member) ++accepted;

    Rng rng(8);
    std::size_t pr_points = 0, rejected_named = 0;
    while (pr_points < 1000) {
      const auto spec = random_extreme_point_spec(rng, false);
      if (!has_pr_factor(spec)) continue;
      ++pr_points;
      const auto v = membership_Q(compose_extreme_point(spec));
      if (!v.member && v.violated &&
          (v.violated->starts_with("step 1") || v.violated->starts_with("history ")))
        ++rejected_named;
    }

    const auto tol = tol_vertices();
    std::size_t tol_accepted = 0;
    for (const auto& v : omp::membership_Q_batch(tol))
      if (v.member) ++tol_accepted;
    const double t = seconds_since(t0);
    return Outcome{accepted == 1000 && rejected_named == pr_points && tol.size() == 4096 &&
                       tol_accepted == 4096 && t < 60.0,
                   fmt("sample_Q accepted %zu/1000; PR-factor points rejected with a history %zu/%zu; "
                       "TOL vertices accepted %zu/%zu",
                       accepted, rejected_named, pr_points, tol_accepted, tol.size())};
  });

  criterion(9, "factorization round trip", [&] {
    Rng rng(9);
    double worst = 0.0;
    std::size_t count = 0, in_p = 0;
    const auto check = [&](const SequentialCorrelation& c) {
      ++count;
      if (membership_P(c).member) ++in_p;
      worst = std::max(worst, max_abs_diff(compose(factorize(c)), c));
    };
    for (int k = 0; k < 250; ++k) check(simulate(random_strategy(Scenario{}, 2 + k % 2, 2 + (k / 2) % 2, rng)));
    for (std::uint64_t k = 0; k < 250; ++k) check(sample_Q(1000 + k, 1 + k % 5));
    for (std::uint64_t k = 0; k < 250; ++k) check(sample_TOL(2000 + k, 1 + k % 5));
    for (int k = 0; k < 250; ++k) {
      const auto u = compose_extreme_point(random_extreme_point_spec(rng, false));
      const auto v = compose_extreme_point(random_extreme_point_spec(rng, false));
      check(SequentialCorrelation::mix(u, v, rng.uniform()));
    }
    return Outcome{count == 1000 && in_p == 1000 && worst <= 1e-12,
                   fmt("%zu tensors (%zu in P), worst reconstruction error %.2e", count, in_p, worst)};
  });

  criterion(10, "hidden-nonlocality demo", [&] {
    const auto t0 = Clock::now();
    const auto demo = hidden_nonlocality_demo(5, werner_local_mixing(5), 0);
    const double t = seconds_since(t0);
    return Outcome{demo.unfiltered_box.member && demo.post_filter_chsh > 2.0 && demo.conditional_chsh > 2.0 && t < 10.0,
                   fmt("d=5 mixing %.2f: unfiltered CHSH %.7f (local: %s), filter pass %.4f, post-filter CHSH "
                       "%.7f, conditional CHSH in tensor %.7f",
                       demo.mixing, demo.unfiltered_chsh, demo.unfiltered_box.member ? "yes" : "no",
                       demo.pass_probability, demo.post_filter_chsh, demo.conditional_chsh)};
  });

  criterion(11, "quantum tensors obey no-signaling and arrow of time", [&] {
    Rng rng(11);
    double ns = 0.0, aot = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const auto c = simulate(random_strategy(Scenario{}, 2 + k % 3, 2 + (k / 3) % 3, rng));
      ns = std::max(ns, check_same_step_no_signaling(c).max_residual);
      aot = std::max(aot, check_arrow_of_time(c).max_residual);
    }
    return Outcome{ns < 1e-12 && aot < 1e-12, fmt("1000 strategies, max NS residual %.2e, max AoT residual %.2e", ns, aot)};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
