#include "qcg/kernels.hpp"
#include "qcg/errors.hpp"

#include <cmath>
#include <exception>

namespace qcg::kernels {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
void check_sizes(std::span<const Vec3> x, std::span<const double> q) {
  if (x.size() != q.size())
    throw ShapeError("coulomb_pair_energy: positions and charges differ in length");
}

double row_energy(std::span<const Vec3> x, std::span<const double> q, std::size_t i) {
  double s = 0;
  for (std::size_t j = i + 1; j < x.size(); ++j)
    s += q[j] / (x[i] - x[j]).norm();
  return q[i] * s;
}
} // namespace

double coulomb_pair_energy_serial(std::span<const Vec3> x,
                                  std::span<const double> q) {
  check_sizes(x, q);
  double e = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    e += row_energy(x, q, i);
  return e;
}

double coulomb_pair_energy_omp(std::span<const Vec3> x,
                               std::span<const double> q) {
  check_sizes(x, q);
  // Row sums are stored and reduced in index order so the result matches
  // the serial kernel exactly.
  std::vector<double> rows(x.size());
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i)
    rows[static_cast<std::size_t>(i)] = row_energy(x, q, static_cast<std::size_t>(i));
  double e = 0;
  for (double r : rows)
    e += r;
  return e;
}

double coulomb_pair_energy(std::span<const Vec3> x, std::span<const double> q,
                           Exec exec) {
  return exec == Exec::serial ? coulomb_pair_energy_serial(x, q)
                              : coulomb_pair_energy_omp(x, q);
}

double Moments::std_error() const {
  if (count < 2)
    return 0.0;
  const double n = static_cast<double>(count);
  const double m = sum / n;
  const double var = std::max(0.0, (sum_sq / n - m * m) * n / (n - 1));
  return std::sqrt(var / n);
}

std::vector<Moments> sharded_monte_carlo(std::uint64_t samples, std::uint64_t seed,
                                         std::size_t width, const ShardBody &body,
                                         Exec exec, std::uint64_t shards) {
  if (shards == 0)
    throw DomainError("sharded_monte_carlo: need at least one shard");
  std::vector<std::vector<Moments>> per_shard(shards, std::vector<Moments>(width));
  auto run_shard = [&](std::uint64_t s) {
    const std::uint64_t n = samples / shards + (s < samples % shards ? 1 : 0);
    std::mt19937_64 rng(mix_seed(seed, s));
    body(rng, n, per_shard[s]);
  };
  if (exec == Exec::serial) {
    for (std::uint64_t s = 0; s < shards; ++s)
      run_shard(s);
  } else {
    const auto ns = static_cast<std::int64_t>(shards);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t s = 0; s < ns; ++s) {
      try {
        run_shard(static_cast<std::uint64_t>(s));
      } catch (...) {
#pragma omp critical(qcg_sharded_mc)
        if (!err)
          err = std::current_exception();
      }
    }
    if (err)
      std::rethrow_exception(err);
  }
  std::vector<Moments> total(width);
  for (const auto &shard : per_shard)
    for (std::size_t w = 0; w < width; ++w)
      total[w].merge(shard[w]);
  return total;
}

} // namespace qcg::kernels
