// Serial against OpenMP versions of the two parallel hot spots: the Schur
// complement assembled in every interior-point iteration, and the pairwise
// distance matrix behind `cpbures matrix`.

#include <benchmark/benchmark.h>

#include "cpbures/bures.hpp"
#include "cpbures/random.hpp"
#include "cpbures/schur.hpp"

namespace {

using namespace cpbures;

// LMI with the shape of the extension formulation: a dense m x m objective
// block and a (2d) x (2d) block touched by one entry per complex variable.
sdp::SdpProblem extension_like(int m, int d, Rng& rng) {
  sdp::LmiBuilder lmi;
  const int t = lmi.add_variable(1.0);
  const int obj = lmi.add_complex_block(m);
  const int ext = lmi.add_complex_block(2 * d);
  lmi.add_coefficient(t, obj, CMat::Identity(m, m));
  for (int p = 0; p < d; ++p) {
    for (int q = 0; q < d; ++q) {
      for (const cplx unit : {cplx(1.0, 0.0), cplx(0.0, 1.0)}) {
        const int v = lmi.add_variable(0.0);
        lmi.add_coefficient_entry(v, ext, p, d + q, unit);
        lmi.add_coefficient(v, obj, random_hermitian(rng, m));
      }
    }
  }
  return lmi.build();
}

sdp::BlockMatrix random_spd(const std::vector<int>& sizes, Rng& rng) {
  sdp::BlockMatrix out;
  std::normal_distribution<double> normal;
  for (int n : sizes) {
    RMat g(n, n);
    for (int i = 0; i < n * n; ++i) g.data()[i] = normal(rng);
    out.push_back(g * g.transpose() + n * RMat::Identity(n, n));
  }
  return out;
}

struct SchurFixture {
  sdp::SdpProblem problem;
  sdp::BlockMatrix x, s_inv;

  explicit SchurFixture(int d) {
    Rng rng(7);
    problem = extension_like(4, d, rng);
    x = random_spd(problem.block_sizes, rng);
    s_inv = random_spd(problem.block_sizes, rng);
  }
};

void BM_SchurSerial(benchmark::State& state) {
  const SchurFixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdp::schur_complement_serial(f.problem.coefficients, f.x, f.s_inv));
  }
}

void BM_SchurParallel(benchmark::State& state) {
  const SchurFixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdp::schur_complement_parallel(f.problem.coefficients, f.x, f.s_inv));
  }
}

std::vector<CpMap> random_maps(int count) {
  Rng rng(11);
  std::vector<CpMap> maps;
  for (int i = 0; i < count; ++i) maps.push_back(random_cpmap(rng, 2, 2, 1 + i % 3));
  return maps;
}

void BM_PairwiseSerial(benchmark::State& state) {
  const auto maps = random_maps(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_bures(maps, kDefaultTol, false));
}

void BM_PairwiseParallel(benchmark::State& state) {
  const auto maps = random_maps(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_bures(maps, kDefaultTol, true));
}

}  // namespace

BENCHMARK(BM_SchurSerial)->Arg(4)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SchurParallel)->Arg(4)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseSerial)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseParallel)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
