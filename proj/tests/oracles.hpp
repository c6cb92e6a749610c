#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner.

#include "qcg/numerics.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace qcg::oracle {

// Golden-section minimisation of a unimodal f on [a, b]; returns (x, f(x)).
inline std::pair<double, double> golden_section(const std::function<double(double)> &f, double a,
                                                double b, double xtol = 1e-12) {
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol * (1 + std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

// min over f >= 0 of tau f + g (f - sqrt(f (f + 1))) by a scan in s = log f.
inline double dispersion_scan(double tau, double g) {
  auto h = [&](double f) { return tau * f - g * f / (f + std::sqrt(f * (f + 1))); };
  const auto [s, v] = golden_section([&](double s) { return h(std::exp(s)); }, -60, 60, 1e-15);
  (void)s;
  return std::min(0.0, v);
}

// Average of 1/|x - y| over y uniform in the ball of radius delta/2 with
// |x| = r, by shell quadrature (inner angular integral done numerically).
inline double newton_ball_average(double delta, double r) {
  const double a = delta / 2;
  auto shell = [&](double s) {
    if (s == 0)
      return 0.0;
    const double avg = integrate_singular(
        [&](double c) { return 0.5 / std::sqrt(r * r + s * s - 2 * r * s * c); }, -1, 1, 1e-11);
    return 3 * s * s / (a * a * a) * avg;
  };
  if (r <= 0 || r >= a)
    return integrate(shell, 0, a, 1e-10);
  return integrate(shell, 0, r, 1e-10) + integrate(shell, r, a, 1e-10);
}

// (2 pi)^-3 int_{p^2/2m + mu < 0} (p^2/2m + mu) d^3p by radial quadrature.
inline double free_fermion_density(double mu, double m) {
  const double pf = std::sqrt(-2 * m * mu);
  return integrate([&](double p) { return 4 * kPi * p * p * (p * p / (2 * m) + mu); }, 0, pf) /
         std::pow(2 * kPi, 3);
}

} // namespace qcg::oracle
