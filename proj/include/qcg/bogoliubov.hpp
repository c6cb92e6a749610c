#pragma once

// Pair-excitation (Bogoliubov) trial states for the two-species Bose gas and
// the Dyson N^{7/5} upper-bound pipeline.

#include "qcg/energy_report.hpp"
#include "qcg/numerics.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace qcg::bog {

inline constexpr double kLambdaMax = 1 - 1e-6;

// Psi = U prod_a (1 - l_a^2)^{1/4} exp(-(l_a / 2) a*(f_a)^2) |0>, U the
// displacement by sqrt(N) xi. Modes f_a are the frame vectors; xi is given in
// that frame (unit length, or anything when sqrt_N = 0).
struct PairExcitationSpec {
  std::size_t n_modes = 1;
  std::vector<double> lambdas;
  double sqrt_N = 0;
  std::vector<double> xi;

  void validate() const;
  Eigen::VectorXd xi_vector() const;
};

// diag(l^2 / (1 - l^2)) in the mode frame.
PsdMatrix gamma_from_spec(const PairExcitationSpec &s);

struct FockMoments {
  Eigen::MatrixXd one_pdm;    // <a*_i a_j>
  Eigen::MatrixXd pair;       // <a*_i a*_j>
  Eigen::MatrixXd four_point; // <b*_u b*_v b_v b_u>, b = a - sqrt(N) xi
  double number_mean = 0;
  double number_variance = 0;
};

struct FockOracleReport {
  std::size_t truncation = 0;
  double norm_deficit = 0; // 1 - |Psi|^2 in the truncated basis
  FockMoments oracle;      // from the explicit state vector
  FockMoments closed;      // from gamma, sqrt(gamma(gamma+1)) and Wick
  double max_deviation() const;
};

// Closed formulas alone.
FockMoments closed_form_moments(const PairExcitationSpec &s);

// Builds Psi in the occupation basis {0..truncation}^n_modes. Requires
// n_modes <= 3; throws TruncationError if the norm deficit exceeds 1e-8.
FockOracleReport fock_oracle(const PairExcitationSpec &s, std::size_t truncation = 40,
                             double max_norm_deficit = 1e-8);

// ---------------------------------------------------------------------------

// xi0 >= 0 with int xi0^2 = 1 (within 1e-10) for the spline.
class CondensateProfile {
public:
  CondensateProfile(RadialGridFunction xi0, double N);
  // Samples f on the nodes and rescales so the spline is normalised.
  static CondensateProfile from_function(const std::function<double(double)> &f,
                                         std::vector<double> nodes, double N);

  const RadialGridFunction &xi0() const { return xi0_; }
  double N() const { return N_; }
  // xi(r, e) = sqrt(1/2) xi0(r) for either charge.
  double charge_component(double r) const;
  // int |grad xi0|^2
  double gradient_norm2() const;

private:
  RadialGridFunction xi0_;
  double N_;
};

// 4 pi int r^2 g(r)^2 dr for a spline, panelled at its nodes.
double radial_norm2(const RadialGridFunction &g);

// Real radial functions u_k(|x|) on R^3 with derivatives, supported in [0, r_max].
struct RadialBasis {
  std::vector<std::function<double(double)>> f;
  std::vector<std::function<double(double)>> df;
  double r_max = 0;

  std::size_t size() const { return f.size(); }
  Eigen::MatrixXd gram() const;
  // <u_k, -Delta u_l> = 4 pi int r^2 u_k' u_l'
  Eigen::MatrixXd laplacian() const;
  // Throws BasisError if the Gram matrix deviates from I by more than tol.
  void check_orthonormal(double tol = 1e-10) const;
};

// Harmonic-oscillator s-states c_k L_k^{(1/2)}(r^2 / w^2) exp(-r^2 / 2w^2).
RadialBasis oscillator_s_basis(std::size_t K, double w, double r_max);

// K_kl = int int u_k(x) xi0(x) |x - y|^{-1} xi0(y) u_l(y) dx dy
Eigen::MatrixXd coulomb_kernel_matrix(const CondensateProfile &xi0, const RadialBasis &basis);

// N Tr(K (gamma0 - sqrt(gamma0 (gamma0 + 1))))
double coulomb_expectation_finite_basis(const CondensateProfile &xi0, const PsdMatrix &gamma0,
                                        const RadialBasis &basis);

// Terms: condensate_kinetic, pair_kinetic, coulomb.
EnergyReport total_energy_expectation(const CondensateProfile &xi0, const PsdMatrix &gamma0,
                                      const RadialBasis &basis);

// ---------------------------------------------------------------------------

struct DispersionMin {
  double f_star;
  double e_min;
};
// min over f >= 0 of tau f + g (f - sqrt(f (f + 1))); (inf, -g/2) at tau = 0.
DispersionMin bogoliubov_dispersion_min(double tau, double g);

struct I0Values {
  double quadrature;
  double closed_form;
};
I0Values compute_I0();

// (2 pi)^{-3} int e_min(p^2 / 2, 4 pi N density / p^2) d^3p
double semiclassical_p_integral(double density, double N);

// ---------------------------------------------------------------------------

struct DysonGrid {
  double r_max = 120;
  std::size_t n = 2000; // interior points; r_i = i h, h = r_max / (n + 1)
  double spacing() const { return r_max / double(n + 1); }
};

struct DysonOptions {
  double tol = 1e-8;       // projected-gradient norm
  std::size_t max_iter = 20000;
  double step = 1;         // largest preconditioned step
  double virial_tol = 1e-3;
};

struct VariationalState {
  DysonGrid grid;
  std::vector<double> u; // r Phi(r) at r_1..r_n
  double K = 0;          // int |grad Phi|^2
  double P = 0;          // int Phi^{5/2}
  double I0 = 0;
  double energy = 0;     // K / 2 - I0 P
  double multiplier = 0;
  double gradient_residual = 0;
  double virial_residual = 0; // |K - (3/4) I0 P| / K
  std::size_t iterations = 0;
  std::vector<double> energy_trace; // energy after each accepted step

  RadialGridFunction phi() const;
  double rms_radius() const;
};

struct DysonTerms {
  double K, P;
  double energy(double I0) const { return 0.5 * K - I0 * P; }
};
// K and P of a radial profile by quadrature on [0, r_max].
DysonTerms dyson_terms(const std::function<double(double)> &phi,
                       const std::function<double(double)> &dphi, double r_max);
// K, P and the norm of discrete values u_i = r_i Phi(r_i).
struct DiscreteTerms {
  double K, P, norm2;
};
DiscreteTerms dyson_discrete_terms(const DysonGrid &g, const std::vector<double> &u);

VariationalState dyson_variational_solve(const DysonGrid &grid, double I0,
                                         const std::function<double(double)> &init,
                                         const DysonOptions &opt = {});

struct DysonPipelineRow {
  double N;
  double length_scale;       // rms radius of xi0
  double condensate_kinetic; // (N/2) int |grad xi0|^2
  double potential;          // -I0 N^{5/4} int xi0^{5/2}
  double energy;
  double ratio;              // energy / N^{7/5}
};
struct DysonPipelineReport {
  VariationalState state;
  std::vector<DysonPipelineRow> rows;
  double max_ratio_spread = 0; // max |ratio - E*| / |E*|
};

// xi0(r) = N^{3/10} Phi(N^{1/5} r) on the rescaled solver grid.
DysonPipelineReport dyson_pipeline(const std::vector<double> &N_list, const VariationalState &s);

} // namespace qcg::bog
