// Serial reference kernels against their OpenMP counterparts. Run with OMP_NUM_THREADS set to
// compare thread counts; both sides produce identical results.

#include <benchmark/benchmark.h>

#include "seqlocal/optimize.hpp"
#include "seqlocal/parallel.hpp"
#include "seqlocal/witness.hpp"

using namespace seqlocal;

namespace {

void BM_simulate_serial(benchmark::State& state) {
  const auto s = canonical_strategy(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s));
}

void BM_simulate_omp(benchmark::State& state) {
  const auto s = canonical_strategy(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(omp::simulate(s));
}

std::vector<double> probe_direction(std::size_t dim) {
  Rng rng(1);
  std::vector<double> dir(dim);
  for (auto& v : dir) v = rng.normal();
  return dir;
}

void BM_argmax_serial(benchmark::State& state) {
  const auto vs = tol_vertex_set();
  const auto dir = probe_direction(vs.dim());
  for (auto _ : state) benchmark::DoNotOptimize(vs.argmax(dir));
}

void BM_argmax_omp(benchmark::State& state) {
  const auto vs = tol_vertex_set();
  const auto dir = probe_direction(vs.dim());
  for (auto _ : state) benchmark::DoNotOptimize(omp::argmax_vertex(vs, dir));
}

void BM_qubit_sampling_serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sample_qubit_projective_strategies(state.range(0), 7));
}

void BM_qubit_sampling_omp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(omp::sample_qubit_projective_strategies(state.range(0), 7));
}

std::vector<SingleStepBox> random_boxes(std::size_t n) {
  Rng rng(3);
  const auto& vertices = single_step_vertices();
  std::vector<SingleStepBox> out(n);
  for (auto& box : out) {
    const auto w = rng.dirichlet(vertices.size());
    for (std::size_t v = 0; v < vertices.size(); ++v)
      for (std::size_t i = 0; i < SingleStepBox::kSize; ++i) box.p[i] += w[v] * vertices[v].box.p[i];
  }
  return out;
}

void BM_locality_serial(benchmark::State& state) {
  const auto boxes = random_boxes(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compare_locality_oracles(boxes, 1e-7, {}));
}

void BM_locality_omp(benchmark::State& state) {
  const auto boxes = random_boxes(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(omp::compare_locality_oracles(boxes, 1e-7, {}));
}

}  // namespace

BENCHMARK(BM_simulate_serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_omp)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_argmax_serial);
BENCHMARK(BM_argmax_omp);
BENCHMARK(BM_qubit_sampling_serial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_qubit_sampling_omp)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_locality_serial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_locality_omp)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
