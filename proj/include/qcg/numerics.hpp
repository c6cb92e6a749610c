#pragma once

// Shared numerical substrate: radial grids, quadrature wrappers, the discrete
// Legendre transform, radial Fourier transforms and PSD matrix functions.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace qcg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Radial grids
// ---------------------------------------------------------------------------

// Geometric spacing r_i = r_min * q^i, i = 0..n-1, ending at r_max.
std::vector<double> geometric_grid(double r_min, double r_max, std::size_t n);
// n uniform points on [a, b] (inclusive).
std::vector<double> uniform_grid(double a, double b, std::size_t n);

// Tail model beyond the last node.
struct ZeroTail {};
struct PowerLawTail {
  double exponent;
};

// A scalar function sampled on a strictly increasing set of radii. Between
// nodes it is interpolated by a cubic Hermite spline with three-point slope
// estimates (linear when fewer than four nodes are present); beyond the last node the declared tail model
// applies; below the first node the first value is held.
class RadialGridFunction {
public:
  RadialGridFunction(std::vector<double> nodes, std::vector<double> values,
                     std::optional<PowerLawTail> tail = std::nullopt);

  static RadialGridFunction sample(const std::function<double(double)> &f,
                                   std::vector<double> nodes,
                                   std::optional<PowerLawTail> tail = std::nullopt);

  double operator()(double r) const;

  const std::vector<double> &nodes() const { return nodes_; }
  const std::vector<double> &values() const { return values_; }
  const std::optional<PowerLawTail> &tail() const { return tail_; }
  double r_max() const { return nodes_.back(); }
  std::size_t size() const { return nodes_.size(); }

private:
  struct Interp;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::optional<PowerLawTail> tail_;
  std::shared_ptr<const Interp> interp_;
};

// ---------------------------------------------------------------------------
// Quadrature (adaptive Gauss-Kronrod / double-exponential, Boost.Math)
// ---------------------------------------------------------------------------

double integrate(const std::function<double(double)> &f, double a, double b,
                 double rel_tol = 1e-13);
// Integrable endpoint singularities at a and/or b.
double integrate_singular(const std::function<double(double)> &f, double a,
                          double b, double rel_tol = 1e-13);
// [a, infinity) for smoothly decaying integrands.
double integrate_to_infinity(const std::function<double(double)> &f, double a,
                             double rel_tol = 1e-13);
// Fixed-order Gauss-Legendre on [a, b]; exact for polynomials of degree <= 19.
double gauss_legendre10(const std::function<double(double)> &f, double a,
                        double b);

// ---------------------------------------------------------------------------
// Legendre transform
// ---------------------------------------------------------------------------

struct KineticProfile {
  enum class Kind { nonrelativistic, relativistic };
  Kind kind;
  double m;

  KineticProfile(Kind k, double mass);
  double energy(double p) const;        // T(p)
  double legendre_dual(double v) const; // T*(v), closed form
};

// A function sampled on a strictly increasing 1-D grid.
struct SampledFunction {
  std::vector<double> x;
  std::vector<double> y;
};

SampledFunction sample_function(const std::function<double(double)> &f,
                                std::vector<double> grid);

// sup_p (v p - T(p)) over the grid, refined by the vertex of the parabola
// through the discrete maximiser and its neighbours.
double legendre_transform(const SampledFunction &T, double v,
                          double convexity_tol = 1e-10);

// The range [min slope, max slope] of the grid chords of T.
std::pair<double, double> slope_range(const SampledFunction &T);

// ---------------------------------------------------------------------------
// Radial Fourier transform  (4 pi / k) int_0^inf r sin(kr) f(r) dr
// ---------------------------------------------------------------------------

double radial_fourier_transform(const RadialGridFunction &f, double k);

// ---------------------------------------------------------------------------
// PSD matrices
// ---------------------------------------------------------------------------

class PsdMatrix {
public:
  // Validates symmetry and eigenvalues >= -tol. Default tol = 1e-10 * ||M||.
  explicit PsdMatrix(Eigen::MatrixXd entries,
                     std::optional<double> min_eig_tolerance = std::nullopt);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXd &entries() const { return entries_; }
  double min_eig_tolerance() const { return tol_; }

private:
  Eigen::MatrixXd entries_;
  double tol_;
};

// Applies fn to the spectrum (negative eigenvalues within tolerance are
// clamped to zero first).
Eigen::MatrixXd psd_function(const PsdMatrix &m,
                             const std::function<double(double)> &fn);
PsdMatrix psd_sqrt(const PsdMatrix &m);

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

double gamma_fn(double x);

} // namespace qcg
