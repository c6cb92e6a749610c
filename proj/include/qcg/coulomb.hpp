#pragma once

// Coulomb energies of signed point configurations and the Newton-smearing
// (Onsager) lower bound.

#include "qcg/energy_report.hpp"
#include "qcg/kernels.hpp"
#include "qcg/numerics.hpp"

#include <json.hpp>

#include <random>
#include <vector>

namespace qcg::coulomb {

enum class Species { plus, minus };

struct Particle {
  Vec3 position;
  double charge;
  Species species;
};

class ChargeConfiguration {
public:
  ChargeConfiguration() = default;
  // Validates the sign/species agreement and rejects positions closer than
  // 1e-12 times the configuration diameter.
  explicit ChargeConfiguration(std::vector<Particle> particles);

  std::size_t size() const { return particles_.size(); }
  const std::vector<Particle> &particles() const { return particles_; }
  const std::vector<Vec3> &positions() const { return positions_; }
  const std::vector<double> &charges() const { return charges_; }
  bool has_both_species() const;
  double diameter() const;
  double sum_q_squared() const;

  ChargeConfiguration scaled(double s) const;

  nlohmann::json to_json() const;
  static ChargeConfiguration from_json(const nlohmann::json &j);

private:
  std::vector<Particle> particles_;
  std::vector<Vec3> positions_;
  std::vector<double> charges_;
};

// sum_{i<j} Q_i Q_j / |r_i - r_j|
double exact_coulomb_energy(const ChargeConfiguration &c,
                            kernels::Exec exec = kernels::Exec::parallel);

// delta_j = distance from j to the nearest particle of the other species.
std::vector<double> nearest_opposite_distances(const ChargeConfiguration &c);

// Potential of the unit charge spread uniformly over the ball of radius
// delta/2: 1/r outside, (3 - 4 r^2/delta^2)/delta inside.
double newton_smeared_potential(double delta, double r);

// Coulomb self-interaction of one smeared unit charge, 12 / (5 delta).
double smeared_self_energy(double delta);

// Interaction of two smeared unit charges (ball diameters delta_i, delta_j)
// with centres d apart. Disjoint balls give exactly 1/d; overlapping balls
// are handled by shell-averaging the Newton potential of one ball over the
// other (inner integral in closed form, outer by piecewise Gauss-Legendre).
double smeared_pair_interaction(double delta_i, double delta_j, double d);
// The shell-averaging route alone, valid for every separation (used to check
// that disjoint balls reproduce 1/d).
double smeared_pair_interaction_shells(double delta_i, double delta_j, double d);

// Report terms:
//   exact                 sum_{i<j} Q_i Q_j / r_ij
//   smeared_pair_sum      sum_{i<j} Q_i Q_j I_ij  (<= exact by Newton)
//   smeared_field_energy  (1/2) iint rho rho' / |r - r'|  (>= 0)
//   self_energy_correction -(12/5) sum Q_j^2 / delta_j
//   chain_bound           smeared_field_energy + self_energy_correction
//   final_bound           -(12/5) sum Q_j^2 / delta_j
//   final_bound_strong    -(6/5) sum Q_j^2 / delta_j
EnergyReport onsager_lower_bound(const ChargeConfiguration &c);

struct RandomConfigSpec {
  std::size_t min_particles = 2;
  std::size_t max_particles = 40;
  double box = 1.0;
};

// Neutral configuration: N+ and N- >= 1, Q+ drawn in [0.5, 2], Q- chosen so
// that N+ Q+ = N- Q-, positions uniform in a cube.
ChargeConfiguration random_neutral_configuration(std::mt19937_64 &rng,
                                                 const RandomConfigSpec &spec = {});

struct SweepResult {
  std::size_t configurations = 0;
  std::size_t violations = 0;       // exact < final_bound
  std::size_t chain_violations = 0; // any link of the chain out of order
  std::size_t disjoint_pairs_checked = 0;
  double max_disjoint_pair_error = 0;
  double min_margin = 0; // min over configs of exact - final_bound
};

SweepResult onsager_sweep(std::size_t configurations, std::uint64_t seed,
                          kernels::Exec exec = kernels::Exec::parallel);

} // namespace qcg::coulomb
