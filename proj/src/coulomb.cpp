#include "qcg/coulomb.hpp"
#include "qcg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcg::coulomb {

ChargeConfiguration::ChargeConfiguration(std::vector<Particle> particles)
    : particles_(std::move(particles)) {
  positions_.reserve(particles_.size());
  charges_.reserve(particles_.size());
  for (const auto &p : particles_) {
    if (!p.position.allFinite() || !std::isfinite(p.charge))
      throw DomainError("ChargeConfiguration: non-finite position or charge");
    const bool sign_ok = p.species == Species::plus ? p.charge > 0 : p.charge < 0;
    if (!sign_ok)
      throw DomainError("ChargeConfiguration: charge sign does not match species label");
    positions_.push_back(p.position);
    charges_.push_back(p.charge);
  }
  const double tol = 1e-12 * diameter();
  for (std::size_t i = 0; i < positions_.size(); ++i)
    for (std::size_t j = i + 1; j < positions_.size(); ++j)
      if ((positions_[i] - positions_[j]).norm() <= tol)
        throw SingularityError("ChargeConfiguration: particles " + std::to_string(i) +
                               " and " + std::to_string(j) + " coincide");
}

bool ChargeConfiguration::has_both_species() const {
  bool plus = false, minus = false;
  for (const auto &p : particles_)
    (p.species == Species::plus ? plus : minus) = true;
  return plus && minus;
}

double ChargeConfiguration::diameter() const {
  double d = 0;
  for (std::size_t i = 0; i < positions_.size(); ++i)
    for (std::size_t j = i + 1; j < positions_.size(); ++j)
      d = std::max(d, (positions_[i] - positions_[j]).norm());
  return d;
}

double ChargeConfiguration::sum_q_squared() const {
  double s = 0;
  for (double q : charges_)
    s += q * q;
  return s;
}

ChargeConfiguration ChargeConfiguration::scaled(double s) const {
  auto ps = particles_;
  for (auto &p : ps)
    p.position *= s;
  return ChargeConfiguration(std::move(ps));
}

nlohmann::json ChargeConfiguration::to_json() const {
  auto j = nlohmann::json::array();
  for (const auto &p : particles_)
    j.push_back({{"position", {p.position.x(), p.position.y(), p.position.z()}},
                 {"charge", p.charge},
                 {"species", p.species == Species::plus ? "plus" : "minus"}});
  return j;
}

ChargeConfiguration ChargeConfiguration::from_json(const nlohmann::json &j) {
  if (!j.is_array())
    throw DomainError("charge configuration JSON must be an array");
  std::vector<Particle> ps;
  for (const auto &e : j) {
    const auto &pos = e.at("position");
    if (!pos.is_array() || pos.size() != 3)
      throw DomainError("position must be [x, y, z]");
    const std::string sp = e.at("species").get<std::string>();
    if (sp != "plus" && sp != "minus")
      throw DomainError("species must be \"plus\" or \"minus\"");
    ps.push_back({Vec3(pos[0].get<double>(), pos[1].get<double>(), pos[2].get<double>()),
                  e.at("charge").get<double>(),
                  sp == "plus" ? Species::plus : Species::minus});
  }
  return ChargeConfiguration(std::move(ps));
}

// ---------------------------------------------------------------------------

double exact_coulomb_energy(const ChargeConfiguration &c, kernels::Exec exec) {
  return kernels::coulomb_pair_energy(c.positions(), c.charges(), exec);
}

std::vector<double> nearest_opposite_distances(const ChargeConfiguration &c) {
  if (!c.has_both_species())
    throw NoOppositeChargeError("nearest_opposite_distances: both species must be present");
  const auto &ps = c.particles();
  std::vector<double> delta(ps.size(), std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < ps.size(); ++j)
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (ps[i].species != ps[j].species)
        delta[j] = std::min(delta[j], (ps[i].position - ps[j].position).norm());
  return delta;
}

double newton_smeared_potential(double delta, double r) {
  if (!(delta > 0))
    throw DomainError("newton_smeared_potential: delta must be positive");
  if (r < 0)
    throw DomainError("newton_smeared_potential: r must be nonnegative");
  if (r >= 0.5 * delta)
    return 1.0 / r;
  return (3.0 - 4.0 * r * r / (delta * delta)) / delta;
}

double smeared_self_energy(double delta) {
  if (!(delta > 0))
    throw DomainError("smeared_self_energy: delta must be positive");
  return 12.0 / (5.0 * delta);
}

double smeared_pair_interaction(double delta_i, double delta_j, double d) {
  if (!(delta_i > 0) || !(delta_j > 0))
    throw DomainError("smeared_pair_interaction: ball diameters must be positive");
  if (d < 0)
    throw DomainError("smeared_pair_interaction: separation must be nonnegative");
  if (d >= 0.5 * (delta_i + delta_j))
    return 1.0 / d;
  return smeared_pair_interaction_shells(delta_i, delta_j, d);
}

double smeared_pair_interaction_shells(double delta_i, double delta_j, double d) {
  if (!(delta_i > 0) || !(delta_j > 0) || d < 0)
    throw DomainError("smeared_pair_interaction_shells: invalid arguments");
  const double a = 0.5 * delta_i, b = 0.5 * delta_j;

  // G(t) = int_0^t u Phi_j(u) du
  const double G_b = 5.0 * b / 8.0;
  auto G = [&](double t) {
    if (t <= b)
      return (1.5 * t * t - t * t * t * t / (delta_j * delta_j)) / delta_j;
    return G_b + (t - b);
  };
  // Shell density 3 s^2 / a^3 times the shell average of Phi_j.
  auto integrand = [&](double s) {
    if (d <= 1e-14 * (a + b))
      return 3.0 * s * s / (a * a * a) * newton_smeared_potential(delta_j, s);
    const double avg = (G(d + s) - G(std::abs(d - s))) / (2.0 * s * d);
    return 3.0 * s * s / (a * a * a) * avg;
  };

  std::vector<double> cuts{0.0, a};
  for (double c : {d - b, d + b, b - d, d})
    if (c > 0 && c < a)
      cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    if (cuts[k + 1] > cuts[k])
      sum += gauss_legendre10(integrand, cuts[k], cuts[k + 1]);
  return sum;
}

EnergyReport onsager_lower_bound(const ChargeConfiguration &c) {
  const auto delta = nearest_opposite_distances(c);
  const auto &x = c.positions();
  const auto &q = c.charges();
  const std::size_t n = c.size();

  double pair_sum = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      pair_sum += q[i] * q[j] *
                  smeared_pair_interaction(delta[i], delta[j], (x[i] - x[j]).norm());
  double self = 0;
  for (std::size_t j = 0; j < n; ++j)
    self += q[j] * q[j] * smeared_self_energy(delta[j]);

  const double exact = exact_coulomb_energy(c, kernels::Exec::serial);
  const double field = pair_sum + 0.5 * self;
  const double correction = -self;
  const double chain = field + correction;
  const double final_bound = -self;
  const double strong = -0.5 * self;

  const double tol = 1e-12 * (std::abs(exact) + self);
  EnergyReport r;
  r.name = "onsager_lower_bound";
  r.add("exact", exact)
      .add("smeared_pair_sum", pair_sum)
      .add("smeared_field_energy", field)
      .add("self_energy_correction", correction)
      .add("chain_bound", chain)
      .add("final_bound", final_bound)
      .add("final_bound_strong", strong);
  r.check("exact >= smeared_pair_sum", exact >= pair_sum - tol)
      .check("smeared_field_energy >= 0", field >= -tol)
      .check("exact >= chain_bound", exact >= chain - tol)
      .check("chain_bound >= final_bound", chain >= final_bound - tol)
      .check("exact >= final_bound_strong", exact >= strong - tol)
      .check("exact >= final_bound", exact >= final_bound - tol);
  r.provenance = {{"particles", n}};
  return r;
}

ChargeConfiguration random_neutral_configuration(std::mt19937_64 &rng,
                                                 const RandomConfigSpec &spec) {
  std::uniform_int_distribution<std::size_t> total(std::max<std::size_t>(2, spec.min_particles),
                                                   spec.max_particles);
  const std::size_t n = total(rng);
  std::uniform_int_distribution<std::size_t> split(1, n - 1);
  const std::size_t n_plus = split(rng);
  const std::size_t n_minus = n - n_plus;
  std::uniform_real_distribution<double> qdist(0.5, 2.0);
  std::uniform_real_distribution<double> xdist(0.0, spec.box);
  const double q_plus = qdist(rng);
  const double q_minus = q_plus * static_cast<double>(n_plus) / static_cast<double>(n_minus);
  std::vector<Particle> ps;
  ps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 p(xdist(rng), xdist(rng), xdist(rng));
    if (i < n_plus)
      ps.push_back({p, q_plus, Species::plus});
    else
      ps.push_back({p, -q_minus, Species::minus});
  }
  return ChargeConfiguration(std::move(ps));
}

SweepResult onsager_sweep(std::size_t configurations, std::uint64_t seed,
                          kernels::Exec exec) {
  struct One {
    bool violation = false;
    bool chain_violation = false;
    std::size_t disjoint = 0;
    double disjoint_err = 0;
    double margin = 0;
  };
  const auto results = kernels::map_indices<One>(
      configurations,
      [&](std::size_t k) {
        std::mt19937_64 rng(kernels::mix_seed(seed, k));
        const auto c = random_neutral_configuration(rng);
        const auto rep = onsager_lower_bound(c);
        One o;
        o.margin = rep.term("exact") - rep.term("final_bound");
        o.violation = !(o.margin >= 0);
        o.chain_violation = !rep.all_checks_pass();
        const auto delta = nearest_opposite_distances(c);
        const auto &ps = c.particles();
        for (std::size_t i = 0; i < ps.size(); ++i)
          for (std::size_t j = i + 1; j < ps.size(); ++j) {
            if (ps[i].species == ps[j].species)
              continue;
            const double d = (ps[i].position - ps[j].position).norm();
            if (0.5 * (delta[i] + delta[j]) > d)
              continue;
            ++o.disjoint;
            const double err =
                std::abs(smeared_pair_interaction_shells(delta[i], delta[j], d) - 1.0 / d) * d;
            o.disjoint_err = std::max(o.disjoint_err, err);
          }
        return o;
      },
      exec);
  SweepResult s;
  s.configurations = configurations;
  s.min_margin = std::numeric_limits<double>::infinity();
  for (const auto &o : results) {
    s.violations += o.violation;
    s.chain_violations += o.chain_violation;
    s.disjoint_pairs_checked += o.disjoint;
    s.max_disjoint_pair_error = std::max(s.max_disjoint_pair_error, o.disjoint_err);
    s.min_margin = std::min(s.min_margin, o.margin);
  }
  return s;
}

} // namespace qcg::coulomb
