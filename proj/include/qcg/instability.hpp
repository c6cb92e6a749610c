#pragma once

// Instability experiments: the relativistic two-body scaling collapse with
// Gaussian trial states, and the fermionic collapse for attractive pair
// potentials built from Dirichlet cube Slater determinants.

#include "qcg/energy_report.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qcg::inst {

// psi(r1, r2) either g_a(r1) g_a(r2) with g_a = (pi a^2)^{-3/4} exp(-r^2 / 2a^2),
// or G_b(R) G_c(r) in centre R = (r1 + r2)/2 and relative r = r1 - r2.
struct TwoBodyTrialState {
  enum class Kind { separable, correlated };
  Kind kind = Kind::separable;
  double a = 1, b = 1, c = 1;

  static TwoBodyTrialState separable(double a);
  static TwoBodyTrialState correlated(double b, double c);

  void validate() const;
  // Every single-particle momentum is an isotropic Gaussian; per-component variance.
  double momentum_variance() const;
  // Per-component variance of the relative coordinate r1 - r2.
  double relative_variance() const;
  // psi_l(r1, r2) = l^{-3} psi(r1 / l, r2 / l)
  TwoBodyTrialState scaled(double ell) const;
  std::string describe() const;
};

// <sqrt(p^2 + m^2) - m> for an isotropic Gaussian momentum density with the
// given per-component variance, by radial quadrature.
double relativistic_kinetic(double momentum_variance, double m);
// <1 / |r|> for an isotropic Gaussian with the given per-component variance, by quadrature.
double inverse_distance(double variance);

// Energy of psi_ell for sum_j (sqrt(-Delta_j + m^2) - m) - Q / |r1 - r2|.
// Terms: kinetic_1, kinetic_2, coulomb.
EnergyReport relativistic_two_body_energy(const TwoBodyTrialState &t, double Q, double m,
                                          double ell);

struct CriticalChargeResult {
  double Q_upper;       // midpoint of the final bracket
  double Q_lo, Q_hi;    // family minimum >= 0 at Q_lo, < 0 at Q_hi
  std::size_t best;     // index of the minimising state at Q_hi
  double ratio_min;     // min over states of K / W
};

// Bisection on Q of the massless energy minimised over the family.
CriticalChargeResult critical_charge_upper_bound(const std::vector<TwoBodyTrialState> &family,
                                                 double eps = 1e-6);

// Separable states over the width grid.
std::vector<TwoBodyTrialState> separable_family(const std::vector<double> &widths);
// Correlated states over all (b, c) pairs.
std::vector<TwoBodyTrialState> correlated_family(const std::vector<double> &b,
                                                 const std::vector<double> &c);

// ---------------------------------------------------------------------------

struct CollapseRow {
  std::int64_t N;
  double kinetic;     // sum of the N lowest Dirichlet levels of -Delta/2
  double per_particle;
  double estimate;    // kinetic / N - (N - 1) c / 2
};

struct CollapseReport {
  int dim;
  double R, c, side;
  std::vector<CollapseRow> rows;
  double kinetic_exponent;  // fitted over all rows
  double target_exponent;   // (n + 2) / n
  std::optional<std::int64_t> N_negative; // estimate < 0 and decreasing from here on
  double tail_slope;        // least-squares d estimate / dN over the upper half
  std::string conclusion;   // "unstable" or "inconclusive"
};

// W, if given, is checked to satisfy W(r) <= -c on [0, R].
CollapseReport attractive_collapse_experiment(const std::vector<std::int64_t> &N_list, double R,
                                              double c, int dim,
                                              const std::function<double(double)> &W = {});

} // namespace qcg::inst
