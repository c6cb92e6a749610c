#pragma once

// Lieb-Thirring type bounds, the box kinetic-energy bound, the semiclassical
// phase-space integral, and the grand-canonical stability constant assembled
// from them.

#include "qcg/numerics.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qcg::lt {

struct LtParameters {
  double C_lt;
  double m = 1.0;
  int nu = 1;

  void validate() const;
};

// Phase-space coefficient with the (2 pi)^-3 cell normalisation,
// 2^{3/2} / (15 pi^2); the default C_lt. Computed from
// semiclassical_phase_space_energy, not typed in.
double default_lt_constant();
LtParameters default_parameters(double m = 1.0, int nu = 1);

struct SpeciesSpec {
  double m_plus = 1.0, m_minus = 1.0;
  double Q_plus = 1.0, Q_minus = 1.0;
  double mu = 0.0;

  void validate() const;
};

// A potential sampled on a uniform 3-D grid (any layout; only the samples
// and the cell volume matter for the integrals here).
struct GridPotential {
  std::span<const double> values;
  double cell_volume;
};

// A spherically symmetric potential V(|r|) supported on |r| < radius.
struct RadialPotential {
  std::function<double(double)> V;
  double radius;
};

// -C m^{3/2} nu int V^{5/2}
double lt_rhs(const GridPotential &V, const LtParameters &p);
double lt_rhs(const RadialPotential &V, const LtParameters &p);

struct PhaseSpaceResult {
  double value;            // iint_{p^2/2m < V} (p^2/2m - V) dr dp
  double kappa;            // value = -kappa m^{3/2} int V^{5/2}
  double kappa_per_cell;   // kappa / (2 pi)^3
  double ratio_to_8pi_15;  // kappa / (8 pi / 15)
};

// The inner momentum integral is done by Gauss-Legendre over the ball
// |p| < sqrt(2 m V(r)); the outer by the grid sum or radial quadrature.
PhaseSpaceResult semiclassical_phase_space_energy(const GridPotential &V, double m);
PhaseSpaceResult semiclassical_phase_space_energy(const RadialPotential &V, double m);

// max_{v >= 0} N v - C m^{3/2} nu v^{5/2} |Omega|
double box_kinetic_lower_bound(std::int64_t N, double volume, const LtParameters &p);
// Stationary point v* of the objective above.
double box_kinetic_optimal_level(std::int64_t N, double volume, const LtParameters &p);

struct PotentialBound {
  double R_star;
  double bound; // -C Q^5 m^{3/2} nu (w N R*^{1/2} + |Omega| R*^{-5/2})
};

// Minimises w N R^{1/2} + |Omega| R^{-5/2} over R > 0. With w = 1 this is the
// displayed form, R* = (5 |Omega| / N)^{1/3}; w = 8 pi uses the exact ball
// integral int_{|r|<R} |r|^{-5/2} dr = 8 pi R^{1/2}.
PotentialBound opposite_charge_potential_bound(std::int64_t N_opposite, double volume,
                                               double Q, const LtParameters &p,
                                               double inside_weight = 1.0);

// Per-volume objective
//   a+ n+^{5/3} + a- n-^{5/3} - b+ n-^{5/6} - b- n+^{5/6} + mu (n+ + n-)
// with the constants of the proof chain (half the kinetic energy kept for the
// box bound, the other half fed to Lieb-Thirring at mass 2m with potential
// (12/5) Q^2 / delta(r), R optimised with the exact ball integral).
struct StabilityObjective {
  double a_plus, a_minus, b_plus, b_minus, mu;
  double operator()(double n_plus, double n_minus) const;
};

StabilityObjective stability_objective(const SpeciesSpec &s, const LtParameters &p_plus,
                                       const LtParameters &p_minus);

struct StabilityResult {
  double min_value; // = -C(mu, m, Q) per unit volume
  double n_plus;
  double n_minus;
};

// Logarithmic-grid scan over (n+, n-) followed by Brent refinement.
StabilityResult stability_constant(const SpeciesSpec &s, const LtParameters &p_plus,
                                   const LtParameters &p_minus);
// Independent route: alternating 1-D minimisations.
StabilityResult stability_constant_coordinate_descent(const SpeciesSpec &s,
                                                      const LtParameters &p_plus,
                                                      const LtParameters &p_minus);

// Squared norms |n|^2 of the N lowest Dirichlet modes of the unit cube in
// `dim` dimensions, n in (positive integers)^dim, ascending with ties broken
// lexicographically.
std::vector<std::int64_t> lowest_dirichlet_modes(int dim, std::int64_t N);

// Sum of the N lowest eigenvalues pi^2 |n|^2 / (2 m side^2) of -(1/2m) Delta
// on a cube with Dirichlet conditions.
double dirichlet_cube_kinetic_sum(std::int64_t N, double side, double m,
                                  int dim = 3);

// Least-squares slope of log y against log x.
double fitted_exponent(std::span<const double> x, std::span<const double> y);

} // namespace qcg::lt
