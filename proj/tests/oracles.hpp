#pragma once

// Independent reference implementations used by the tests. Everything here is written from
// the definitions, without calling the library code it is compared against.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seqlocal/correlation.hpp"
#include "seqlocal/rng.hpp"

namespace oracle {

inline constexpr double kSqrt2 = 1.4142135623730951;

/// Flat index of p(a1 a2 b1 b2 | x1 x2 y1 y2) for the default two-step scenario.
inline std::size_t index2(int a1, int b1, int a2, int b2, int x1, int y1, int x2, int y2) {
  return static_cast<std::size_t>((a1 + 2 * b1 + 4 * a2 + 8 * b2) + 16 * (x1 + 2 * y1 + 4 * x2 + 8 * y2));
}

inline seqlocal::SingleStepBox deterministic(int f, int g) {
  seqlocal::SingleStepBox box;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) box.p[((f >> x) & 1) + 2 * ((g >> y) & 1) + 4 * x + 8 * y] = 1.0;
  return box;
}

inline seqlocal::SingleStepBox pr(int alpha, int beta, int gamma) {
  seqlocal::SingleStepBox box;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma)) box.p[a + 2 * b + 4 * x + 8 * y] = 0.5;
  return box;
}

/// Vertex by id: 0..15 deterministic (4 f + g), 16..23 PR variants.
inline seqlocal::SingleStepBox vertex(int id) {
  if (id < 16) return deterministic(id / 4, id % 4);
  const int k = id - 16;
  return pr((k >> 2) & 1, (k >> 1) & 1, k & 1);
}

inline double correlator(const seqlocal::SingleStepBox& box, int x, int y) {
  double e = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) e += ((a + b) % 2 == 0 ? 1.0 : -1.0) * box.p[a + 2 * b + 4 * x + 8 * y];
  return e;
}

/// E00 + E01 + E10 - E11.
inline double chsh(const seqlocal::SingleStepBox& box) {
  return correlator(box, 0, 0) + correlator(box, 0, 1) + correlator(box, 1, 0) - correlator(box, 1, 1);
}

/// Largest of the 8 relabeled CHSH values, enumerated as all odd sign patterns.
inline double max_chsh(const seqlocal::SingleStepBox& box) {
  double best = -1e300;
  for (int mask = 0; mask < 16; ++mask) {
    if (__builtin_popcount(mask) % 2 == 0) continue;
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += ((mask >> k) & 1 ? -1.0 : 1.0) * correlator(box, k >> 1, k & 1);
    best = std::max(best, s);
  }
  return best;
}

/// Multilinear form of the two-step concatenated witness, without any division.
inline double concatenated_witness(const seqlocal::SequentialCorrelation& corr) {
  double total = 0.0;
  for (int x1 = 0; x1 < 2; ++x1)
    for (int y1 = 0; y1 < 2; ++y1)
      for (int a1 = 0; a1 < 2; ++a1) {
        const int b1 = a1 ^ (x1 & y1);
        for (int x2 = 0; x2 < 2; ++x2)
          for (int y2 = 0; y2 < 2; ++y2)
            for (int a2 = 0; a2 < 2; ++a2)
              for (int b2 = 0; b2 < 2; ++b2) {
                const double sign = ((x2 & y2) ? -1.0 : 1.0) * ((a2 ^ b2) ? -1.0 : 1.0);
                total += sign * corr[index2(a1, b1, a2, b2, x1, y1, x2, y2)];
              }
      }
  return total;
}

/// p = B1(a1 b1|x1 y1) * B2(a2 b2|x2 y2), the second box independent of the history.
inline seqlocal::SequentialCorrelation product(const seqlocal::SingleStepBox& b1, const seqlocal::SingleStepBox& b2) {
  seqlocal::SequentialCorrelation out(seqlocal::Scenario{});
  for (int x1 = 0; x1 < 2; ++x1)
    for (int y1 = 0; y1 < 2; ++y1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int y2 = 0; y2 < 2; ++y2)
          for (int a1 = 0; a1 < 2; ++a1)
            for (int b1i = 0; b1i < 2; ++b1i)
              for (int a2 = 0; a2 < 2; ++a2)
                for (int b2i = 0; b2i < 2; ++b2i)
                  out[index2(a1, b1i, a2, b2i, x1, y1, x2, y2)] =
                      b1.p[a1 + 2 * b1i + 4 * x1 + 8 * y1] * b2.p[a2 + 2 * b2i + 4 * x2 + 8 * y2];
  return out;
}

// -- random boxes ---------------------------------------------------------------------------

/// Dirichlet mixture of all 24 no-signaling vertices.
inline seqlocal::SingleStepBox random_ns_box(seqlocal::Rng& rng) {
  const auto w = rng.dirichlet(24);
  seqlocal::SingleStepBox box;
  for (int v = 0; v < 24; ++v) {
    const auto vb = vertex(v);
    for (int i = 0; i < 16; ++i) box.p[i] += w[v] * vb.p[i];
  }
  return box;
}

/// lambda * PR_k + (1 - lambda) * local mixture, with lambda spread around the CHSH threshold.
inline seqlocal::SingleStepBox random_boundary_box(seqlocal::Rng& rng) {
  const auto w = rng.dirichlet(16);
  seqlocal::SingleStepBox local;
  for (int v = 0; v < 16; ++v) {
    const auto vb = vertex(v);
    for (int i = 0; i < 16; ++i) local.p[i] += w[v] * vb.p[i];
  }
  const auto pr_box = vertex(16 + static_cast<int>(rng.below(8)));
  const double lambda = rng.uniform() * 0.8;
  seqlocal::SingleStepBox box;
  for (int i = 0; i < 16; ++i) box.p[i] = lambda * pr_box.p[i] + (1.0 - lambda) * local.p[i];
  return box;
}

/// Independent distribution per setting pair; signaling in general.
inline seqlocal::SingleStepBox random_signaling_box(seqlocal::Rng& rng) {
  seqlocal::SingleStepBox box;
  for (int s = 0; s < 4; ++s) {
    const auto w = rng.dirichlet(4);
    for (int o = 0; o < 4; ++o) box.p[o + 4 * s] = w[o];
  }
  return box;
}

}  // namespace oracle
