// Serial reference kernels against their OpenMP counterparts.

#include "qcg/coulomb.hpp"
#include "qcg/graf_schenker.hpp"
#include "qcg/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace qcg;

namespace {

struct Cloud {
  std::vector<Vec3> x;
  std::vector<double> q;
};

Cloud make_cloud(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    c.x.emplace_back(u(rng), u(rng), u(rng));
    c.q.push_back(i % 2 ? 1.0 : -1.0);
  }
  return c;
}

void BM_pair_energy(benchmark::State &st, kernels::Exec exec) {
  const auto c = make_cloud(std::size_t(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::coulomb_pair_energy(c.x, c.q, exec));
  st.SetComplexityN(st.range(0));
}

void BM_sharded_mc(benchmark::State &st, kernels::Exec exec) {
  const auto body = [](std::mt19937_64 &rng, std::uint64_t n, std::span<kernels::Moments> out) {
    std::uniform_real_distribution<double> u(0, 1);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double a = u(rng), b = u(rng), c = u(rng);
      out[0].push(a * a + b * b + c * c < 1 ? 1.0 : 0.0);
    }
  };
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::sharded_monte_carlo(std::uint64_t(st.range(0)), 7, 1, body, exec));
}

void BM_overlap_kernel(benchmark::State &st, kernels::Exec exec) {
  const auto S = gs::Simplex::regular();
  for (auto _ : st)
    benchmark::DoNotOptimize(
        gs::overlap_kernel(Vec3::Zero(), Vec3(0.3, 0.1, 0), S, 1.0, std::uint64_t(st.range(0)), 3, exec));
}

void BM_onsager_sweep(benchmark::State &st, kernels::Exec exec) {
  for (auto _ : st)
    benchmark::DoNotOptimize(coulomb::onsager_sweep(std::size_t(st.range(0)), 5, exec));
}

} // namespace

BENCHMARK_CAPTURE(BM_pair_energy, serial, kernels::Exec::serial)->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK_CAPTURE(BM_pair_energy, omp, kernels::Exec::parallel)->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK_CAPTURE(BM_sharded_mc, serial, kernels::Exec::serial)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_sharded_mc, omp, kernels::Exec::parallel)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_overlap_kernel, serial, kernels::Exec::serial)->Arg(100000);
BENCHMARK_CAPTURE(BM_overlap_kernel, omp, kernels::Exec::parallel)->Arg(100000);
BENCHMARK_CAPTURE(BM_onsager_sweep, serial, kernels::Exec::serial)->Arg(2000);
BENCHMARK_CAPTURE(BM_onsager_sweep, omp, kernels::Exec::parallel)->Arg(2000);

BENCHMARK_MAIN();
