#include "qcg/errors.hpp"
#include "qcg/kernels.hpp"

#include <doctest.h>

#include <omp.h>

#include <random>

using namespace qcg;
using namespace qcg::kernels;

namespace {
std::pair<std::vector<Vec3>, std::vector<double>> random_charges(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Vec3> x(n);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = Vec3(u(rng), u(rng), u(rng));
    q[i] = u(rng) < 0.5 ? -1.0 : 1.0;
  }
  return {x, q};
}
} // namespace

TEST_CASE("coulomb pair kernel: serial and OpenMP agree bit for bit") {
  for (std::size_t n : {1u, 2u, 17u, 300u}) {
    const auto [x, q] = random_charges(n, static_cast<unsigned>(n));
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      CHECK(coulomb_pair_energy_omp(x, q) == coulomb_pair_energy_serial(x, q));
    }
  }
}

TEST_CASE("coulomb pair kernel against a direct double loop") {
  const auto [x, q] = random_charges(25, 3);
  double e = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      e += q[i] * q[j] / (x[i] - x[j]).norm();
  CHECK(coulomb_pair_energy(x, q) == doctest::Approx(e).epsilon(1e-13));
  std::vector<double> short_q(3);
  CHECK_THROWS_AS(coulomb_pair_energy_serial(x, short_q), ShapeError);
}

TEST_CASE("sharded Monte Carlo is independent of the execution mode") {
  const ShardBody body = [](std::mt19937_64 &rng, std::uint64_t n, std::span<Moments> out) {
    std::uniform_real_distribution<double> u(0, 1);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = u(rng);
      out[0].push(x);
      out[1].push(x * x);
    }
  };
  const auto a = sharded_monte_carlo(10001, 42, 2, body, Exec::serial);
  for (int threads : {1, 3}) {
    omp_set_num_threads(threads);
    const auto b = sharded_monte_carlo(10001, 42, 2, body, Exec::parallel);
    CHECK(a[0].sum == b[0].sum);
    CHECK(a[1].sum_sq == b[1].sum_sq);
    CHECK(b[0].count == 10001);
  }
  CHECK(a[0].mean() == doctest::Approx(0.5).epsilon(0.02));
  CHECK(a[1].mean() == doctest::Approx(1.0 / 3).epsilon(0.03));
  CHECK(a[0].std_error() == doctest::Approx(std::sqrt(1.0 / 12 / 10001)).epsilon(0.05));
  CHECK_THROWS_AS(sharded_monte_carlo(10, 1, 1, body, Exec::serial, 0), DomainError);
}

TEST_CASE("map_indices preserves index order") {
  const auto v = map_indices<std::size_t>(
      100, [](std::size_t i) { return i * i; }, Exec::parallel);
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(v[i] == i * i);
}

TEST_CASE("map_indices rethrows library errors from worker threads") {
  CHECK_THROWS_AS(map_indices<int>(
                      10,
                      [](std::size_t i) -> int {
                        if (i == 7)
                          throw DomainError("boom");
                        return 0;
                      },
                      Exec::parallel),
                  DomainError);
}

TEST_CASE("mix_seed decorrelates streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(5, 9) == mix_seed(5, 9));
}
