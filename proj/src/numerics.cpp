#include "qcg/numerics.hpp"
#include "qcg/errors.hpp"

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qcg {

std::vector<double> geometric_grid(double r_min, double r_max, std::size_t n) {
  if (!(r_min > 0) || !(r_max > r_min) || n < 2)
    throw DomainError("geometric_grid: need 0 < r_min < r_max and n >= 2");
  std::vector<double> r(n);
  const double q = std::log(r_max / r_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = r_min * std::exp(q * static_cast<double>(i));
  r.back() = r_max;
  return r;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (!(b > a) || n < 2)
    throw DomainError("uniform_grid: need a < b and n >= 2");
  std::vector<double> x(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = a + h * static_cast<double>(i);
  x.back() = b;
  return x;
}

// ---------------------------------------------------------------------------

struct RadialGridFunction::Interp {
  using Hermite = boost::math::interpolators::cubic_hermite<std::vector<double>>;
  std::optional<Hermite> spline;
};

namespace {
// Three-point derivative estimates on a non-uniform grid. They are linear in
// the samples, so the interpolant (and everything integrated from it) is too.
std::vector<double> three_point_slopes(const std::vector<double> &x,
                                       const std::vector<double> &y) {
  const std::size_t n = x.size();
  std::vector<double> d(n);
  auto quad_slope = [&](std::size_t i0, double at) {
    const double x0 = x[i0], x1 = x[i0 + 1], x2 = x[i0 + 2];
    return y[i0] * (2 * at - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
           y[i0 + 1] * (2 * at - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
           y[i0 + 2] * (2 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
  };
  d[0] = quad_slope(0, x[0]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = quad_slope(i - 1, x[i]);
  d[n - 1] = quad_slope(n - 3, x[n - 1]);
  return d;
}
} // namespace

RadialGridFunction::RadialGridFunction(std::vector<double> nodes,
                                       std::vector<double> values,
                                       std::optional<PowerLawTail> tail)
    : nodes_(std::move(nodes)), values_(std::move(values)), tail_(tail) {
  if (nodes_.size() < 2 || nodes_.size() != values_.size())
    throw DomainError("RadialGridFunction: need >= 2 nodes and matching values");
  if (nodes_.front() < 0)
    throw DomainError("RadialGridFunction: first node must be >= 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw DomainError("RadialGridFunction: nodes must be strictly increasing");
  for (double v : values_)
    if (!std::isfinite(v))
      throw DomainError("RadialGridFunction: non-finite sample");
  auto interp = std::make_shared<Interp>();
  if (nodes_.size() >= 4)
    interp->spline.emplace(std::vector<double>(nodes_), std::vector<double>(values_),
                           three_point_slopes(nodes_, values_));
  interp_ = std::move(interp);
}

RadialGridFunction RadialGridFunction::sample(const std::function<double(double)> &f,
                                              std::vector<double> nodes,
                                              std::optional<PowerLawTail> tail) {
  std::vector<double> v(nodes.size());
  std::transform(nodes.begin(), nodes.end(), v.begin(), f);
  return RadialGridFunction(std::move(nodes), std::move(v), tail);
}

double RadialGridFunction::operator()(double r) const {
  if (r <= nodes_.front())
    return values_.front();
  if (r >= nodes_.back()) {
    if (r == nodes_.back())
      return values_.back();
    if (!tail_)
      return 0.0;
    return values_.back() * std::pow(r / nodes_.back(), tail_->exponent);
  }
  if (interp_->spline)
    return (*interp_->spline)(r);
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  const auto i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  const double t = (r - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
  return (1 - t) * values_[i] + t * values_[i + 1];
}

// ---------------------------------------------------------------------------

double integrate(const std::function<double(double)> &f, double a, double b,
                 double rel_tol) {
  if (a == b)
    return 0.0;
  double err = 0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 20, rel_tol, &err);
}

double integrate_singular(const std::function<double(double)> &f, double a,
                          double b, double rel_tol) {
  if (a == b)
    return 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, rel_tol);
}

double integrate_to_infinity(const std::function<double(double)> &f, double a,
                             double rel_tol) {
  boost::math::quadrature::exp_sinh<double> es;
  return es.integrate([&](double x) { return f(a + x); }, 0.0,
                      std::numeric_limits<double>::infinity(), rel_tol);
}

double gauss_legendre10(const std::function<double(double)> &f, double a,
                        double b) {
  return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

// ---------------------------------------------------------------------------

KineticProfile::KineticProfile(Kind k, double mass) : kind(k), m(mass) {
  if (!(m > 0))
    throw DomainError("KineticProfile: mass must be positive");
}

double KineticProfile::energy(double p) const {
  if (kind == Kind::nonrelativistic)
    return p * p / (2 * m);
  return p * p / (std::sqrt(p * p + m * m) + m);
}

double KineticProfile::legendre_dual(double v) const {
  if (kind == Kind::nonrelativistic)
    return 0.5 * m * v * v;
  if (std::abs(v) >= 1)
    throw DomainError("relativistic Legendre dual requires |v| < 1");
  return m * v * v / (1 + std::sqrt(1 - v * v));
}

SampledFunction sample_function(const std::function<double(double)> &f,
                                std::vector<double> grid) {
  SampledFunction s{std::move(grid), {}};
  s.y.resize(s.x.size());
  std::transform(s.x.begin(), s.x.end(), s.y.begin(), f);
  return s;
}

std::pair<double, double> slope_range(const SampledFunction &T) {
  if (T.x.size() < 3 || T.x.size() != T.y.size())
    throw DomainError("legendre_transform: need >= 3 samples");
  const std::size_t n = T.x.size();
  return {(T.y[1] - T.y[0]) / (T.x[1] - T.x[0]),
          (T.y[n - 1] - T.y[n - 2]) / (T.x[n - 1] - T.x[n - 2])};
}

double legendre_transform(const SampledFunction &T, double v,
                          double convexity_tol) {
  const auto [s_lo, s_hi] = slope_range(T);
  const std::size_t n = T.x.size();
  double prev = s_lo;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double s = (T.y[i + 1] - T.y[i]) / (T.x[i + 1] - T.x[i]);
    if (s < prev - convexity_tol)
      throw ConvexityError("legendre_transform: sampled function is not convex near x = " +
                           std::to_string(T.x[i]));
    prev = s;
  }
  if (v < s_lo || v > s_hi)
    throw DomainError("legendre_transform: v outside the attained slope range");

  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double val = v * T.x[i] - T.y[i];
    if (val > best_val) {
      best_val = val;
      best = i;
    }
  }
  if (best == 0 || best == n - 1)
    return best_val;

  // Parabola through (x0,g0),(x1,g1),(x2,g2) with g = v x - T(x).
  const double x0 = T.x[best - 1], x1 = T.x[best], x2 = T.x[best + 1];
  const double g0 = v * x0 - T.y[best - 1], g1 = best_val,
               g2 = v * x2 - T.y[best + 1];
  const double d01 = (g1 - g0) / (x1 - x0);
  const double d12 = (g2 - g1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0); // leading coefficient
  if (!(curv < 0))
    return best_val;
  // g(x) = g1 + d(x - x1) + curv (x - x0)(x - x1)... write in Newton form.
  // g(x) = g0 + d01 (x - x0) + curv (x - x0)(x - x1)
  // g'(x) = d01 + curv (2x - x0 - x1) = 0
  const double xs = 0.5 * (x0 + x1) - d01 / (2 * curv);
  if (xs < x0 || xs > x2)
    return best_val;
  const double gs = g0 + d01 * (xs - x0) + curv * (xs - x0) * (xs - x1);
  return std::max(gs, best_val);
}

// ---------------------------------------------------------------------------

double radial_fourier_transform(const RadialGridFunction &f, double k) {
  if (!(k > 0))
    throw DomainError("radial_fourier_transform: k must be positive");
  const auto &r = f.nodes();
  if (f.tail() && !(f.tail()->exponent < -1.0))
    throw TailError("radial_fourier_transform: power-law tail exponent must be < -1");

  // Interior: Gauss-Legendre on pieces no longer than a quarter period.
  const double max_piece = 0.5 * kPi / k;
  double interior = 0;
  auto integrand = [&](double x) { return x * std::sin(k * x) * f(x); };
  if (r.front() > 0)
    interior += gauss_legendre10(integrand, 0.0, r.front());
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double a = r[i], b = r[i + 1];
    const auto pieces =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / max_piece)));
    const double h = (b - a) / static_cast<double>(pieces);
    for (std::size_t j = 0; j < pieces; ++j)
      interior += gauss_legendre10(integrand, a + h * j, a + h * (j + 1));
  }

  double tail = 0;
  if (f.tail()) {
    // f(R + t) = f(R) ((R + t)/R)^p, sin(k(R + t)) split into sin/cos parts.
    const double R = f.r_max(), fR = f.values().back(), p = f.tail()->exponent;
    auto g = [&](double t) { return (R + t) * fR * std::pow((R + t) / R, p); };
    boost::math::quadrature::ooura_fourier_sin<double> sin_int;
    boost::math::quadrature::ooura_fourier_cos<double> cos_int;
    const double s = sin_int.integrate(g, k).first;
    const double c = cos_int.integrate(g, k).first;
    tail = s * std::cos(k * R) + c * std::sin(k * R);
    if (!std::isfinite(tail))
      throw TailError("radial_fourier_transform: tail integral failed");
  }
  return 4 * kPi / k * (interior + tail);
}

// ---------------------------------------------------------------------------

PsdMatrix::PsdMatrix(Eigen::MatrixXd entries, std::optional<double> min_eig_tolerance)
    : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw DomainError("PsdMatrix: must be square with positive dimension");
  const double norm = entries_.norm();
  const double asym = (entries_ - entries_.transpose()).norm();
  if (asym > 1e-12 * std::max(norm, 1.0))
    throw NotPsdError("PsdMatrix: matrix is not symmetric");
  entries_ = 0.5 * (entries_ + entries_.transpose());
  tol_ = min_eig_tolerance.value_or(1e-10 * norm);
  if (tol_ < 0)
    throw DomainError("PsdMatrix: tolerance must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol_)
    throw NotPsdError("PsdMatrix: eigenvalue " +
                      std::to_string(es.eigenvalues().minCoeff()) +
                      " below -tolerance");
}

Eigen::MatrixXd psd_function(const PsdMatrix &m,
                             const std::function<double(double)> &fn) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.entries());
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -m.min_eig_tolerance())
      throw NotPsdError("psd_function: eigenvalue below -tolerance");
    ev[i] = fn(std::max(ev[i], 0.0));
  }
  const auto &V = es.eigenvectors();
  return V * ev.asDiagonal() * V.transpose();
}

PsdMatrix psd_sqrt(const PsdMatrix &m) {
  Eigen::MatrixXd s = psd_function(m, [](double x) { return std::sqrt(x); });
  return PsdMatrix(std::move(s), m.min_eig_tolerance());
}

// ---------------------------------------------------------------------------

double gamma_fn(double x) {
  if (!(x > 0))
    throw DomainError("gamma_fn: x must be positive");
  return std::tgamma(x);
}

} // namespace qcg
