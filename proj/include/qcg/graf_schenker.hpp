#pragma once

// Monte-Carlo machinery around the simplex-averaging (Graf-Schenker)
// inequality: Haar isometries, the overlap kernel F(r, r') / |l S|, the
// positive-type check of (1 - g(x)) / x and the sliding experiment.
//
// Normalisation: translations carry Lebesgue measure and SO(3) carries unit
// mass, so F(r, r) / |l S| = 1.

#include "qcg/coulomb.hpp"
#include "qcg/kernels.hpp"
#include "qcg/numerics.hpp"

#include <array>
#include <random>
#include <string>
#include <vector>

namespace qcg::gs {

class Simplex {
public:
  explicit Simplex(std::array<Vec3, 4> vertices);

  // Regular tetrahedron with unit edge length, centroid at the origin.
  static Simplex regular();

  const std::array<Vec3, 4> &vertices() const { return v_; }
  double volume() const { return volume_; }
  double diameter() const;
  Vec3 centroid() const;
  // Largest vertex distance from the centroid.
  double circumradius() const;

  // Barycentric containment with slack.
  bool contains(const Vec3 &p, double slack = 1e-12) const;

  // The same simplex translated so its centroid is at the origin.
  Simplex centered() const;

private:
  std::array<Vec3, 4> v_;
  Mat3 to_bary_;
  double volume_;
};

struct Box {
  Vec3 lo, hi;
  double volume() const;
};

struct IsometrySample {
  Mat3 rotation;
  Vec3 translation;
  // g(x) = R x + t
  Vec3 apply(const Vec3 &x) const { return rotation * x + translation; }
  Vec3 inverse_apply(const Vec3 &y) const { return rotation.transpose() * (y - translation); }
};

// Unit quaternion from four normal deviates, mapped to SO(3).
Mat3 haar_rotation(std::mt19937_64 &rng);
IsometrySample sample_isometry(std::mt19937_64 &rng, const Box &translation_cell);
// Rotation angle in [0, pi].
double rotation_angle(const Mat3 &R);

// Translations placing the centred l*S so that it can touch any of the points:
// bounding box of the points grown by l * circumradius.
Box translation_cell(const std::vector<Vec3> &points, const Simplex &simplex, double ell);

struct KernelEstimate {
  double estimate;
  double std_error;
};

// F(r, r') / |l S| by Monte Carlo over isometries with translations uniform in
// translation_cell({r, r'}).
KernelEstimate overlap_kernel(const Vec3 &r, const Vec3 &r_prime, const Simplex &simplex,
                              double ell, std::uint64_t samples, std::uint64_t seed,
                              kernels::Exec exec = kernels::Exec::parallel);

struct RadialKernelProfile {
  std::vector<double> x;
  std::vector<double> g;
  std::vector<double> sigma;
};

// g on `nodes` separations (direction e_z); the node at l * diam is exactly 0.
RadialKernelProfile radial_overlap_profile(const Simplex &simplex, double ell,
                                           std::size_t nodes, std::uint64_t samples,
                                           std::uint64_t seed,
                                           kernels::Exec exec = kernels::Exec::parallel);

// (4 pi / k) int_0^X sin(kx) g(x) dx for piecewise-linear g through the
// profile nodes, written as sum_i w_i(k) g_i; returns the weights.
std::vector<double> sine_transform_weights(const std::vector<double> &x, double k);

struct PositiveTypeReport {
  enum class Status { positive, inconclusive, negative };
  std::vector<double> k;
  std::vector<double> value; // Fourier transform of (1 - g(x)) / x
  std::vector<double> sigma;
  double min_value = 0;
  double min_sigma_units = 0; // min value / sigma
  Status status = Status::inconclusive;
  RadialKernelProfile profile;

  std::string status_name() const;
};

// Every value >= 3 sigma: positive; some value < -3 sigma: negative;
// otherwise inconclusive.
PositiveTypeReport gs_positive_type_check(const Simplex &simplex, double ell,
                                          std::size_t radial_nodes,
                                          std::uint64_t samples_per_node,
                                          const std::vector<double> &k_grid, std::uint64_t seed,
                                          kernels::Exec exec = kernels::Exec::parallel);

// Log-spaced k in [0.05, 8] / (l diam).
std::vector<double> default_k_grid(const Simplex &simplex, double ell, std::size_t n = 30);

struct SlidingRow {
  double ell;
  double average;   // (1/|l S|) int sum Q_i Q_j 1 1 / r_ij d lambda
  double exact;
  double excess;    // average - exact
  double excess_se;
  double D;         // excess * ell / sum Q^2
  double D_se;
};

struct SlidingReport {
  std::vector<SlidingRow> rows;
  double C_fit = 0;            // max over rows of D + 3 se
  double top_slope = 0;        // weighted slope of D against log ell, upper half
  double top_slope_se = 0;
  bool no_upward_trend = true; // top_slope < 3 top_slope_se
};

SlidingReport sliding_inequality_experiment(const coulomb::ChargeConfiguration &c,
                                            const Simplex &simplex,
                                            const std::vector<double> &ell_list,
                                            std::uint64_t samples, std::uint64_t seed,
                                            kernels::Exec exec = kernels::Exec::parallel);

} // namespace qcg::gs
