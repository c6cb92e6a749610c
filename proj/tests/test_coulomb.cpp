#include "qcg/coulomb.hpp"
#include "qcg/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qcg;
using namespace qcg::coulomb;

namespace {
Particle plus(double x, double y, double z, double q = 1.0) {
  return {Vec3(x, y, z), q, Species::plus};
}
Particle minus(double x, double y, double z, double q = 1.0) {
  return {Vec3(x, y, z), -q, Species::minus};
}

// Oracle for the double integral of two uniform balls by adaptive
// quadrature over the radial coordinate of ball i and the polar
// angle, with the potential of ball j evaluated in closed form.
double ball_ball_oracle(double di, double dj, double d) {
  const double a = di / 2;
  return integrate(
      [&](double s) {
        const double shell = integrate(
            [&](double c) {
              const double r = std::sqrt(std::max(0.0, d * d + s * s - 2 * d * s * c));
              return 0.5 * newton_smeared_potential(dj, r);
            },
            -1, 1, 1e-10);
        return 3 * s * s / (a * a * a) * shell;
      },
      0, a, 1e-10);
}
} // namespace

TEST_CASE("exact coulomb energy") {
  const ChargeConfiguration pair({plus(0, 0, 0), minus(1, 0, 0)});
  CHECK(exact_coulomb_energy(pair) == doctest::Approx(-1.0));
  const ChargeConfiguration single({plus(0, 0, 0)});
  CHECK(exact_coulomb_energy(single) == 0.0);

  const ChargeConfiguration square(
      {plus(0, 0, 0), minus(1, 0, 0), plus(1, 1, 0), minus(0, 1, 0)});
  double e = 0;
  const auto &x = square.positions();
  const auto &q = square.charges();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      e += q[i] * q[j] / (x[i] - x[j]).norm();
  CHECK(exact_coulomb_energy(square) == doctest::Approx(e).epsilon(1e-15));
  CHECK(e == doctest::Approx(-4 + 2 / std::sqrt(2.0)));
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(ChargeConfiguration({plus(0, 0, 0), plus(0, 0, 0)}), SingularityError);
  CHECK_THROWS_AS(ChargeConfiguration({{Vec3(0, 0, 0), -1.0, Species::plus}}), DomainError);
  CHECK_THROWS_AS(ChargeConfiguration({{Vec3(0, 0, 0), 1.0, Species::minus}}), DomainError);
}

TEST_CASE("JSON round trip") {
  const ChargeConfiguration c({plus(0, 0.5, 1), minus(1, 2, 3, 2.5)});
  const auto back = ChargeConfiguration::from_json(c.to_json());
  REQUIRE(back.size() == 2);
  CHECK(back.charges()[1] == -2.5);
  CHECK(back.positions()[0].y() == 0.5);
  CHECK_THROWS_AS(ChargeConfiguration::from_json(nlohmann::json::parse(
                      R"([{"position":[0,0,0],"charge":1,"species":"up"}])")),
                  DomainError);
}

TEST_CASE("nearest opposite distances") {
  const ChargeConfiguration two({plus(0, 0, 0), minus(2.5, 0, 0)});
  const auto d2 = nearest_opposite_distances(two);
  CHECK(d2[0] == doctest::Approx(2.5));
  CHECK(d2[1] == doctest::Approx(2.5));

  const ChargeConfiguration three({plus(0, 0, 0), minus(1, 0, 0), minus(3, 0, 0)});
  const auto d3 = nearest_opposite_distances(three);
  CHECK(d3[0] == doctest::Approx(1));
  CHECK(d3[1] == doctest::Approx(1));
  CHECK(d3[2] == doctest::Approx(3));

  CHECK_THROWS_AS(nearest_opposite_distances(ChargeConfiguration({plus(0, 0, 0), plus(1, 0, 0)})),
                  NoOppositeChargeError);

  std::mt19937_64 rng(5);
  const auto c = random_neutral_configuration(rng, {20, 20, 1.0});
  const auto d = nearest_opposite_distances(c);
  const auto &ps = c.particles();
  for (std::size_t j = 0; j < ps.size(); ++j) {
    double best = 1e300;
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (ps[i].species != ps[j].species)
        best = std::min(best, std::sqrt((ps[i].position - ps[j].position).squaredNorm()));
    CHECK(d[j] == best);
  }
}

TEST_CASE("Newton smeared potential") {
  CHECK(newton_smeared_potential(1.0, 0.0) == doctest::Approx(3.0));
  CHECK(newton_smeared_potential(2.0, 1.0) == doctest::Approx(1.0));
  CHECK(newton_smeared_potential(2.0, std::nextafter(1.0, 0.0)) == doctest::Approx(1.0));
  CHECK(newton_smeared_potential(0.4, 1.0) == doctest::Approx(1.0));
  for (double r = 0.01; r < 2; r += 0.01) {
    const double v = newton_smeared_potential(1.3, r);
    CHECK(v <= 1 / r + 1e-15);
    if (r < 0.65)
      CHECK(v < 1 / r);
  }
  CHECK_THROWS_AS(newton_smeared_potential(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(newton_smeared_potential(1.0, -1.0), DomainError);

  // Average of 1/|r - r'| over the ball by direct quadrature.
  const double delta = 1.0, r = 0.2, a = 0.5;
  auto shell = [&](double s) {
    const double avg = integrate_singular(
        [&](double c) { return 0.5 / std::sqrt(r * r + s * s - 2 * r * s * c); }, -1, 1, 1e-11);
    return 3 * s * s / (a * a * a) * avg;
  };
  const double direct = integrate(shell, 0, r, 1e-10) + integrate(shell, r, a, 1e-10);
  CHECK(newton_smeared_potential(delta, r) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("smeared self energy") {
  CHECK(smeared_self_energy(1.0) == doctest::Approx(2.4));
  CHECK(smeared_self_energy(2.0) == doctest::Approx(1.2));
  // Radial reduction: int rho(r) Phi(r) with rho = 3 r^2 / a^3 on [0, a].
  const double a = 0.5;
  const double q = integrate(
      [&](double r) { return 3 * r * r / (a * a * a) * newton_smeared_potential(1.0, r); }, 0,
      a);
  CHECK(q == doctest::Approx(2.4).epsilon(1e-6));
  CHECK_THROWS_AS(smeared_self_energy(-1.0), DomainError);
}

TEST_CASE("smeared pair interaction") {
  CHECK(smeared_pair_interaction(1, 1, 2) == doctest::Approx(0.5));
  CHECK(smeared_pair_interaction(1, 1, 0.3) < 1 / 0.3);
  CHECK(smeared_pair_interaction(0.7, 0.7, 0.0) == doctest::Approx(12 / (5 * 0.7)).epsilon(1e-12));
  CHECK(smeared_pair_interaction_shells(1, 1, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(smeared_pair_interaction_shells(0.6, 1.4, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (auto [di, dj, d] : {std::tuple{1.0, 1.0, 0.3}, {0.5, 1.5, 0.2}, {2.0, 0.3, 0.9},
                           {1.0, 2.0, 0.0}, {1.2, 0.8, 0.95}}) {
    const double v = smeared_pair_interaction(di, dj, d);
    CHECK(v == doctest::Approx(ball_ball_oracle(di, dj, d)).epsilon(1e-7));
    CHECK(v == doctest::Approx(smeared_pair_interaction(dj, di, d)).epsilon(1e-10));
    if (d > 0)
      CHECK(v <= 1 / d);
  }
}

TEST_CASE("Onsager bound for a single pair") {
  const ChargeConfiguration pair({plus(0, 0, 0), minus(1, 0, 0)});
  const auto r = onsager_lower_bound(pair);
  CHECK(r.term("exact") == doctest::Approx(-1.0));
  CHECK(r.term("final_bound") == doctest::Approx(-4.8));
  CHECK(r.term("final_bound_strong") == doctest::Approx(-2.4));
  CHECK(r.term("smeared_pair_sum") == doctest::Approx(-1.0));
  CHECK(r.all_checks_pass());
  CHECK_THROWS_AS(onsager_lower_bound(ChargeConfiguration({plus(0, 0, 0)})),
                  NoOppositeChargeError);
}

TEST_CASE("Onsager bound scales as 1/s") {
  std::mt19937_64 rng(9);
  const auto c = random_neutral_configuration(rng);
  const auto r1 = onsager_lower_bound(c);
  for (double s : {0.1, 3.0, 17.0}) {
    const auto rs = onsager_lower_bound(c.scaled(s));
    for (const auto &[k, v] : r1.terms)
      CHECK(rs.term(k) == doctest::Approx(v / s).epsilon(1e-10));
  }
}

TEST_CASE("Onsager sweep: no violations, serial equals parallel") {
  const auto a = onsager_sweep(300, 1234, kernels::Exec::serial);
  const auto b = onsager_sweep(300, 1234, kernels::Exec::parallel);
  CHECK(a.violations == 0);
  CHECK(a.chain_violations == 0);
  CHECK(a.min_margin > 0);
  CHECK(a.disjoint_pairs_checked > 0);
  CHECK(a.max_disjoint_pair_error < 1e-10);
  CHECK(a.min_margin == b.min_margin);
  CHECK(a.disjoint_pairs_checked == b.disjoint_pairs_checked);
}
