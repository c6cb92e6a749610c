#pragma once

// Data-parallel kernels. Every kernel has a serial reference implementation
// and an OpenMP one; the two must agree bit-for-bit (the Monte-Carlo kernels
// split work into a fixed number of seeded shards and reduce them in shard
// order, so the thread count never changes the result).

#include "qcg/numerics.hpp"

#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace qcg::kernels {

enum class Exec { serial, parallel };

// SplitMix64 finaliser; derives independent per-shard seeds from a master.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

// sum_{i<j} q_i q_j / |x_i - x_j|
double coulomb_pair_energy_serial(std::span<const Vec3> x,
                                  std::span<const double> q);
double coulomb_pair_energy_omp(std::span<const Vec3> x,
                               std::span<const double> q);
double coulomb_pair_energy(std::span<const Vec3> x, std::span<const double> q,
                           Exec exec = Exec::parallel);

// Running first and second moments of a scalar estimator.
struct Moments {
  double sum = 0;
  double sum_sq = 0;
  std::uint64_t count = 0;

  void push(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  void merge(const Moments &o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  // Standard error of the mean.
  double std_error() const;
};

// A shard body draws `n` samples from `rng` and pushes one value per sample
// into each of the `width` accumulators it is handed.
using ShardBody =
    std::function<void(std::mt19937_64 &rng, std::uint64_t n, std::span<Moments> out)>;

inline constexpr std::uint64_t kDefaultShards = 64;

std::vector<Moments> sharded_monte_carlo(std::uint64_t samples, std::uint64_t seed,
                                         std::size_t width, const ShardBody &body,
                                         Exec exec = Exec::parallel,
                                         std::uint64_t shards = kDefaultShards);

// Apply f to each index in [0, n) and collect the results in index order.
template <class T>
std::vector<T> map_indices(std::size_t n, const std::function<T(std::size_t)> &f,
                           Exec exec = Exec::parallel) {
  std::vector<T> out(n);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = f(i);
    return out;
  }
  // Exceptions cannot cross the parallel region; keep the first and rethrow.
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out[i] = f(i);
    } catch (...) {
#pragma omp critical(qcg_map_indices)
      if (!err)
        err = std::current_exception();
    }
  }
  if (err)
    std::rethrow_exception(err);
  return out;
}

} // namespace qcg::kernels
