#include "qcg/lieb_thirring.hpp"
#include "qcg/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qcg::lt {

void LtParameters::validate() const {
  if (!(C_lt > 0) || !std::isfinite(C_lt))
    throw DomainError("LtParameters: C_lt must be positive and finite");
  if (!(m > 0) || !std::isfinite(m))
    throw DomainError("LtParameters: mass must be positive");
  if (nu < 1)
    throw DomainError("LtParameters: nu must be a positive integer");
}

void SpeciesSpec::validate() const {
  if (!(m_plus > 0) || !(m_minus > 0))
    throw DomainError("SpeciesSpec: masses must be positive");
  if (!(Q_plus > 0) || !(Q_minus > 0))
    throw DomainError("SpeciesSpec: charge magnitudes must be positive");
  if (!std::isfinite(mu))
    throw DomainError("SpeciesSpec: mu must be finite");
}

namespace {

// 4 pi int_{|p| < sqrt(2 m v)} p^2 (p^2 / 2m - v) dp
double momentum_ball_energy(double v, double m) {
  if (v <= 0)
    return 0.0;
  const double P = std::sqrt(2.0 * m * v);
  return 4.0 * kPi * gauss_legendre10([&](double p) { return p * p * (p * p / (2.0 * m) - v); },
                                      0.0, P);
}

void check_grid(const GridPotential &V) {
  if (!(V.cell_volume > 0))
    throw DomainError("GridPotential: cell volume must be positive");
  for (double v : V.values)
    if (!(v >= 0) || !std::isfinite(v))
      throw DomainError("potential samples must be finite and nonnegative");
}

double grid_v52(const GridPotential &V) {
  double s = 0;
  for (double v : V.values)
    s += std::pow(v, 2.5);
  return s * V.cell_volume;
}

double radial_integral(const RadialPotential &V, const std::function<double(double)> &g) {
  if (!(V.radius > 0))
    throw DomainError("RadialPotential: radius must be positive");
  auto integrand = [&](double r) {
    const double v = V.V(r);
    if (!(v >= 0))
      throw DomainError("potential must be nonnegative");
    return 4.0 * kPi * r * r * g(v);
  };
  // Below r0 the integrand is treated as a local power law r^s, integrated
  // analytically; s <= -1 means the integral diverges at the origin.
  const double r0 = 1e-12 * V.radius, r1 = 1e-13 * V.radius;
  const double f0 = integrand(r0), f1 = integrand(r1);
  double core = 0;
  if (f0 > 0 && f1 > 0) {
    const double slope = std::log(f0 / f1) / std::log(r0 / r1);
    if (!(slope > -1 + 1e-6))
      throw DomainError("integral of V^{5/2} diverges at the origin");
    core = f0 * r0 / (slope + 1);
  } else if (!std::isfinite(f0) || !std::isfinite(f1)) {
    throw DomainError("integral of V^{5/2} diverges at the origin");
  }
  double s;
  try {
    s = core + integrate_singular(integrand, r0, V.radius, 1e-12);
  } catch (const DomainError &) {
    throw;
  } catch (const std::exception &e) {
    throw DomainError(std::string("integral of V^{5/2} does not converge: ") + e.what());
  }
  if (!std::isfinite(s))
    throw DomainError("integral of V^{5/2} diverges");
  return s;
}

double radial_v52(const RadialPotential &V) {
  return radial_integral(V, [](double v) { return std::pow(v, 2.5); });
}

PhaseSpaceResult finish(double value, double v52, double m) {
  PhaseSpaceResult r{};
  r.value = value;
  r.kappa = v52 > 0 ? -value / (std::pow(m, 1.5) * v52) : 0.0;
  r.kappa_per_cell = r.kappa / std::pow(2.0 * kPi, 3);
  r.ratio_to_8pi_15 = r.kappa / (8.0 * kPi / 15.0);
  return r;
}

} // namespace

double default_lt_constant() {
  static const double c = [] {
    const RadialPotential unit{[](double) { return 1.0; }, 1.0};
    return semiclassical_phase_space_energy(unit, 1.0).kappa_per_cell;
  }();
  return c;
}

LtParameters default_parameters(double m, int nu) {
  LtParameters p{default_lt_constant(), m, nu};
  p.validate();
  return p;
}

double lt_rhs(const GridPotential &V, const LtParameters &p) {
  p.validate();
  check_grid(V);
  return -p.C_lt * std::pow(p.m, 1.5) * p.nu * grid_v52(V);
}

double lt_rhs(const RadialPotential &V, const LtParameters &p) {
  p.validate();
  return -p.C_lt * std::pow(p.m, 1.5) * p.nu * radial_v52(V);
}

PhaseSpaceResult semiclassical_phase_space_energy(const GridPotential &V, double m) {
  if (!(m > 0))
    throw DomainError("semiclassical_phase_space_energy: mass must be positive");
  check_grid(V);
  double value = 0;
  for (double v : V.values)
    value += momentum_ball_energy(v, m);
  return finish(value * V.cell_volume, grid_v52(V), m);
}

PhaseSpaceResult semiclassical_phase_space_energy(const RadialPotential &V, double m) {
  if (!(m > 0))
    throw DomainError("semiclassical_phase_space_energy: mass must be positive");
  const double v52 = radial_v52(V);
  const double value = radial_integral(V, [m](double v) { return momentum_ball_energy(v, m); });
  return finish(value, v52, m);
}

double box_kinetic_optimal_level(std::int64_t N, double volume, const LtParameters &p) {
  p.validate();
  if (N < 1)
    throw DomainError("box_kinetic_lower_bound: N must be >= 1");
  if (!(volume > 0))
    throw DomainError("box_kinetic_lower_bound: volume must be positive");
  const double A = p.C_lt * std::pow(p.m, 1.5) * p.nu * volume;
  return std::pow(2.0 * static_cast<double>(N) / (5.0 * A), 2.0 / 3.0);
}

double box_kinetic_lower_bound(std::int64_t N, double volume, const LtParameters &p) {
  const double v = box_kinetic_optimal_level(N, volume, p);
  return 0.6 * static_cast<double>(N) * v;
}

PotentialBound opposite_charge_potential_bound(std::int64_t N_opposite, double volume,
                                               double Q, const LtParameters &p,
                                               double inside_weight) {
  p.validate();
  if (N_opposite < 1 || !(volume > 0) || !(Q > 0) || !(inside_weight > 0))
    throw DomainError("opposite_charge_potential_bound: inputs must be positive");
  const double wN = inside_weight * static_cast<double>(N_opposite);
  PotentialBound b{};
  b.R_star = std::cbrt(5.0 * volume / wN);
  const double min = wN * std::sqrt(b.R_star) + volume * std::pow(b.R_star, -2.5);
  b.bound = -p.C_lt * std::pow(Q, 5) * std::pow(p.m, 1.5) * p.nu * min;
  return b;
}

// ---------------------------------------------------------------------------

double StabilityObjective::operator()(double n_plus, double n_minus) const {
  return a_plus * std::pow(n_plus, 5.0 / 3.0) + a_minus * std::pow(n_minus, 5.0 / 3.0) -
         b_plus * std::pow(n_minus, 5.0 / 6.0) - b_minus * std::pow(n_plus, 5.0 / 6.0) +
         mu * (n_plus + n_minus);
}

StabilityObjective stability_objective(const SpeciesSpec &s, const LtParameters &p_plus,
                                       const LtParameters &p_minus) {
  s.validate();
  p_plus.validate();
  p_minus.validate();
  auto a = [](const LtParameters &p, double m) {
    return 0.5 * 0.6 * std::pow(0.4, 2.0 / 3.0) * std::pow(p.C_lt, -2.0 / 3.0) / m *
           std::pow(static_cast<double>(p.nu), -2.0 / 3.0);
  };
  // Lieb-Thirring at mass 2m for the potential (12/5) Q^2 / delta, then the
  // R-optimisation with the ball integral 8 pi R^{1/2}.
  const double r_opt = 1.2 * std::pow(8.0 * kPi, 5.0 / 6.0) * std::pow(5.0, 1.0 / 6.0);
  auto b = [&](const LtParameters &p, double m, double Q) {
    return p.C_lt * std::pow(2.0 * m, 1.5) * p.nu * std::pow(2.4, 2.5) * std::pow(Q, 5) *
           r_opt;
  };
  return {a(p_plus, s.m_plus), a(p_minus, s.m_minus), b(p_plus, s.m_plus, s.Q_plus),
          b(p_minus, s.m_minus, s.Q_minus), s.mu};
}

namespace {

// a n^{5/3} - b n^{5/6} + mu n, written in t = n^{1/6} so it is a smooth
// polynomial with a single interior minimiser.
struct Scalar1D {
  double a, b, mu;
  double operator()(double t) const {
    const double t5 = std::pow(t, 5);
    return a * t5 * t5 - b * t5 + mu * std::pow(t, 6);
  }
  // Beyond this t the function is positive.
  double t_max() const {
    const double n_hi = std::max(std::pow(2.0 * b / a, 1.2),
                                 std::pow(2.0 * std::max(0.0, -mu) / a, 1.5));
    return std::pow(2.0 * n_hi + 1e-300, 1.0 / 6.0);
  }
};

double brent_min(const Scalar1D &f, double lo, double hi) {
  std::uintmax_t iters = 500;
  const auto r = boost::math::tools::brent_find_minima(f, lo, hi, 50, iters);
  return r.first;
}

StabilityResult assemble(const StabilityObjective &obj, double np, double nm) {
  const double v = obj(np, nm);
  if (!std::isfinite(v))
    throw ConvergenceError("stability_constant: minimisation produced a non-finite value", v);
  return {std::min(0.0, v), np, nm};
}

} // namespace

StabilityResult stability_constant(const SpeciesSpec &s, const LtParameters &p_plus,
                                   const LtParameters &p_minus) {
  const auto obj = stability_objective(s, p_plus, p_minus);
  const Scalar1D fp{obj.a_plus, obj.b_minus, obj.mu};
  const Scalar1D fm{obj.a_minus, obj.b_plus, obj.mu};
  const double tp_max = fp.t_max(), tm_max = fm.t_max();

  // Logarithmic scan over densities in [1e-12 n_hi, n_hi] plus n = 0.
  constexpr int kGrid = 200;
  auto node = [](double t_max, int i) {
    if (i == 0)
      return 0.0;
    return t_max * std::pow(1e-2, static_cast<double>(kGrid - i) / (kGrid - 1));
  };
  int best_i = 0, best_j = 0;
  double best = obj(0, 0);
  for (int i = 0; i <= kGrid; ++i)
    for (int j = 0; j <= kGrid; ++j) {
      const double tp = node(tp_max, i), tm = node(tm_max, j);
      const double v = obj(std::pow(tp, 6), std::pow(tm, 6));
      if (v < best) {
        best = v;
        best_i = i;
        best_j = j;
      }
    }
  auto refine = [&](const Scalar1D &f, double t_max, int i) {
    const double lo = node(t_max, std::max(0, i - 1));
    const double hi = node(t_max, std::min(kGrid, i + 1));
    const double t = brent_min(f, lo, hi);
    return f(t) < f(node(t_max, i)) ? t : node(t_max, i);
  };
  const double tp = refine(fp, tp_max, best_i);
  const double tm = refine(fm, tm_max, best_j);
  return assemble(obj, std::pow(tp, 6), std::pow(tm, 6));
}

StabilityResult stability_constant_coordinate_descent(const SpeciesSpec &s,
                                                      const LtParameters &p_plus,
                                                      const LtParameters &p_minus) {
  const auto obj = stability_objective(s, p_plus, p_minus);
  double np = 1.0, nm = 1.0;
  double prev = obj(np, nm);
  for (int sweep = 0; sweep < 100; ++sweep) {
    // Minimise in n+ with n- fixed, then the reverse. Terms not involving the
    // active coordinate are constant and do not affect the minimiser.
    const Scalar1D fp{obj.a_plus, obj.b_minus, obj.mu};
    np = std::pow(brent_min(fp, 0.0, fp.t_max()), 6);
    const Scalar1D fm{obj.a_minus, obj.b_plus, obj.mu};
    nm = std::pow(brent_min(fm, 0.0, fm.t_max()), 6);
    const double cur = obj(np, nm);
    if (std::abs(cur - prev) <= 1e-15 * std::max(1.0, std::abs(cur)))
      break;
    prev = cur;
  }
  return assemble(obj, np, nm);
}

// ---------------------------------------------------------------------------

std::vector<std::int64_t> lowest_dirichlet_modes(int dim, std::int64_t N) {
  if (dim < 1)
    throw DomainError("lowest_dirichlet_modes: dimension must be >= 1");
  if (N < 1)
    throw DomainError("lowest_dirichlet_modes: N must be >= 1");
  auto cap = static_cast<std::int64_t>(
      std::ceil(std::pow(static_cast<double>(N), 1.0 / dim) * 1.3)) + 1;
  for (;;) {
    const double count = std::pow(static_cast<double>(cap), dim);
    if (count > 5e8)
      throw DomainError("lowest_dirichlet_modes: enumeration too large");
    std::vector<std::int64_t> norms;
    norms.reserve(static_cast<std::size_t>(count));
    std::vector<std::int64_t> n(static_cast<std::size_t>(dim), 1);
    for (;;) {
      std::int64_t s = 0;
      for (auto k : n)
        s += k * k;
      norms.push_back(s);
      int d = dim - 1;
      while (d >= 0 && n[static_cast<std::size_t>(d)] == cap)
        n[static_cast<std::size_t>(d--)] = 1;
      if (d < 0)
        break;
      ++n[static_cast<std::size_t>(d)];
    }
    if (static_cast<std::int64_t>(norms.size()) >= N) {
      std::nth_element(norms.begin(), norms.begin() + (N - 1), norms.end());
      const std::int64_t nth = norms[static_cast<std::size_t>(N - 1)];
      // Any mode outside the cap has |n|^2 >= (cap + 1)^2 + dim - 1.
      if (nth < (cap + 1) * (cap + 1) + dim - 1) {
        norms.resize(static_cast<std::size_t>(N));
        std::sort(norms.begin(), norms.end());
        return norms;
      }
    }
    cap = cap + cap / 2 + 1;
  }
}

double dirichlet_cube_kinetic_sum(std::int64_t N, double side, double m, int dim) {
  if (!(side > 0) || !(m > 0))
    throw DomainError("dirichlet_cube_kinetic_sum: side and mass must be positive");
  const auto norms = lowest_dirichlet_modes(dim, N);
  const double total = std::accumulate(norms.begin(), norms.end(), 0.0,
                                       [](double acc, std::int64_t v) {
                                         return acc + static_cast<double>(v);
                                       });
  return kPi * kPi * total / (2.0 * m * side * side);
}

double fitted_exponent(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("fitted_exponent: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0))
      throw DomainError("fitted_exponent: data must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0))
    throw DegenerateError("fitted_exponent: x values must not all coincide");
  return (n * sxy - sx * sy) / den;
}

} // namespace qcg::lt
