#include "qcg/errors.hpp"
#include "qcg/lieb_thirring.hpp"

#include <boost/math/tools/minima.hpp>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace qcg;
using namespace qcg::lt;

namespace {
LtParameters unit_params() { return {1.0, 1.0, 1}; }
} // namespace

TEST_CASE("lt_rhs on grids and radial potentials") {
  std::vector<double> zeros(1000, 0.0);
  CHECK(lt_rhs(GridPotential{zeros, 1e-3}, unit_params()) == 0.0);

  const LtParameters p{0.7, 2.0, 3};
  std::vector<double> flat(1000, 1.7);
  CHECK(lt_rhs(GridPotential{flat, 1e-3}, p) ==
        doctest::Approx(-0.7 * std::pow(2.0, 1.5) * 3 * std::pow(1.7, 2.5)).epsilon(1e-12));

  for (double a : {0.5, 1.0, 4.0}) {
    const RadialPotential coul{[](double r) { return 1 / r; }, a};
    CHECK(lt_rhs(coul, p) ==
          doctest::Approx(-0.7 * std::pow(2.0, 1.5) * 3 * 8 * kPi * std::sqrt(a)).epsilon(1e-9));
  }
  std::vector<double> bad{1.0, -0.5};
  CHECK_THROWS_AS(lt_rhs(GridPotential{bad, 1.0}, p), DomainError);
  CHECK_THROWS_AS(lt_rhs(GridPotential{flat, 1.0}, LtParameters{-1, 1, 1}), DomainError);
}

TEST_CASE("semiclassical phase space energy") {
  std::vector<double> zeros(8, 0.0);
  CHECK(semiclassical_phase_space_energy(GridPotential{zeros, 0.125}, 1.0).value == 0.0);

  // Inner integral in closed form: 4 pi [P^5/(10 m) - V P^3/3], P = sqrt(2 m V).
  auto inner = [](double V, double m) {
    const double P = std::sqrt(2 * m * V);
    return 4 * kPi * (std::pow(P, 5) / (10 * m) - V * P * P * P / 3);
  };
  std::vector<double> unit(1000, 1.0);
  const auto r = semiclassical_phase_space_energy(GridPotential{unit, 1e-3}, 1.0);
  CHECK(r.value == doctest::Approx(inner(1.0, 1.0)).epsilon(1e-12));
  CHECK(r.ratio_to_8pi_15 == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  CHECK(r.kappa_per_cell == doctest::Approx(std::pow(2.0, 1.5) / (15 * kPi * kPi)).epsilon(1e-12));

  const auto r2 = semiclassical_phase_space_energy(GridPotential{unit, 1e-3}, 2.0);
  CHECK(r2.value == doctest::Approx(std::pow(2.0, 1.5) * r.value).epsilon(1e-12));

  // Non-constant radial potential: kappa is independent of the profile.
  const RadialPotential gauss{[](double x) { return 2 * std::exp(-x * x); }, 6.0};
  const auto rg = semiclassical_phase_space_energy(gauss, 1.0);
  CHECK(rg.kappa == doctest::Approx(r.kappa).epsilon(1e-9));

  const RadialPotential divergent{[](double x) { return std::pow(x, -1.3); }, 1.0};
  CHECK_THROWS_AS(semiclassical_phase_space_energy(divergent, 1.0), DomainError);
}

TEST_CASE("default constant equals the phase-space coefficient per cell") {
  CHECK(default_lt_constant() ==
        doctest::Approx(std::pow(2.0, 1.5) / (15 * kPi * kPi)).epsilon(1e-12));
}

TEST_CASE("box kinetic lower bound") {
  const double v = box_kinetic_lower_bound(1, 1.0, unit_params());
  CHECK(v == doctest::Approx(0.6 * std::pow(0.4, 2.0 / 3.0)).epsilon(1e-14));

  // Grid scan over the level v.
  double best = 0;
  for (double x = 0; x < 2; x += 1e-5)
    best = std::max(best, x - std::pow(x, 2.5));
  CHECK(best == doctest::Approx(v).epsilon(1e-8));

  const LtParameters p{0.3, 1.7, 2};
  const double b = box_kinetic_lower_bound(5, 2.0, p);
  CHECK(box_kinetic_lower_bound(40, 16.0, p) == doctest::Approx(8 * b).epsilon(1e-12));
  const LtParameters p8{0.3, 1.7, 16};
  CHECK(box_kinetic_lower_bound(5, 2.0, p8) == doctest::Approx(b / 4).epsilon(1e-12));

  for (std::int64_t N = 1; N < 50; ++N) {
    CHECK(box_kinetic_lower_bound(N + 1, 2.0, p) > box_kinetic_lower_bound(N, 2.0, p));
    CHECK(box_kinetic_lower_bound(N, 2.5, p) < box_kinetic_lower_bound(N, 2.0, p));
  }
  CHECK_THROWS_AS(box_kinetic_lower_bound(0, 1.0, p), DomainError);
  CHECK_THROWS_AS(box_kinetic_lower_bound(1, 0.0, p), DomainError);
}

TEST_CASE("opposite charge potential bound") {
  const auto p = unit_params();
  const auto b = opposite_charge_potential_bound(1, 5.0, 1.0, p);
  CHECK(b.R_star == doctest::Approx(std::cbrt(25.0)).epsilon(1e-14));
  CHECK(opposite_charge_potential_bound(10, 2.0, 1.0, p).R_star == doctest::Approx(1.0));

  for (double w : {1.0, 8 * kPi}) {
    const auto c = opposite_charge_potential_bound(7, 3.0, 1.3, p, w);
    // First-order condition (w N / 2) R^{-1/2} = (5/2) V R^{-7/2}.
    const double lhs = 0.5 * w * 7 / std::sqrt(c.R_star);
    const double rhs = 2.5 * 3.0 * std::pow(c.R_star, -3.5);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    // 1-D scan confirms it is the minimiser.
    auto f = [&](double R) { return w * 7 * std::sqrt(R) + 3.0 * std::pow(R, -2.5); };
    std::uintmax_t it = 200;
    const auto m = boost::math::tools::brent_find_minima(f, 1e-3, 1e3, 50, it);
    CHECK(m.first == doctest::Approx(c.R_star).epsilon(1e-7));
    CHECK(-std::pow(1.3, 5) * f(c.R_star) == doctest::Approx(c.bound).epsilon(1e-14));
  }

  // N^{5/6} V^{1/6} scaling.
  const double b1 = opposite_charge_potential_bound(3, 2.0, 1.0, p).bound;
  const double b2 = opposite_charge_potential_bound(6, 2.0, 1.0, p).bound;
  const double b3 = opposite_charge_potential_bound(3, 4.0, 1.0, p).bound;
  CHECK(b2 / b1 == doctest::Approx(std::pow(2.0, 5.0 / 6)).epsilon(1e-12));
  CHECK(b3 / b1 == doctest::Approx(std::pow(2.0, 1.0 / 6)).epsilon(1e-12));
}

TEST_CASE("stability constant") {
  const auto pp = default_parameters(1.0);
  const auto pm = default_parameters(1.0);

  SUBCASE("large positive mu") {
    SpeciesSpec s{1, 1, 1, 1, 1e6};
    const auto r = stability_constant(s, pp, pm);
    CHECK(r.min_value <= 0);
    CHECK(r.min_value > -1e-6);
  }
  SUBCASE("symmetric species give equal densities") {
    SpeciesSpec s{1, 1, 1, 1, -0.3};
    const auto r = stability_constant(s, pp, pm);
    CHECK(r.n_plus == doctest::Approx(r.n_minus).epsilon(1e-8));
    CHECK(r.min_value < 0);
  }
  SUBCASE("two routes agree") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.3, 3.0), mu(-2, 2);
    for (int k = 0; k < 30; ++k) {
      SpeciesSpec s{u(rng), u(rng), u(rng), u(rng), mu(rng)};
      const auto a = stability_constant(s, default_parameters(s.m_plus),
                                        default_parameters(s.m_minus));
      const auto b = stability_constant_coordinate_descent(s, default_parameters(s.m_plus),
                                                           default_parameters(s.m_minus));
      CHECK(a.min_value == doctest::Approx(b.min_value).epsilon(1e-8));
      // Independent dense scan never beats the minimiser.
      const auto obj = stability_objective(s, default_parameters(s.m_plus),
                                           default_parameters(s.m_minus));
      for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) {
          const double np = a.n_plus * (0.5 + i / 40.0), nm = a.n_minus * (0.5 + j / 40.0);
          CHECK(obj(np, nm) >= a.min_value - 1e-9 * std::abs(a.min_value));
        }
    }
  }
  SUBCASE("monotone in the charges") {
    SpeciesSpec s{1.3, 0.8, 1.0, 1.0, -0.5};
    double prev = stability_constant(s, pp, pm).min_value;
    for (double Q = 1.1; Q < 3; Q += 0.2) {
      s.Q_plus = Q;
      const double v = stability_constant(s, pp, pm).min_value;
      CHECK(v <= prev);
      prev = v;
    }
    for (double Q = 1.1; Q < 3; Q += 0.2) {
      s.Q_minus = Q;
      const double v = stability_constant(s, pp, pm).min_value;
      CHECK(v <= prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(stability_constant(SpeciesSpec{0, 1, 1, 1, 0}, pp, pm), DomainError);
}

TEST_CASE("Dirichlet cube modes") {
  CHECK(dirichlet_cube_kinetic_sum(1, 1, 1) == doctest::Approx(1.5 * kPi * kPi));
  CHECK(dirichlet_cube_kinetic_sum(3, 1, 1) == doctest::Approx(1.5 * kPi * kPi + 6 * kPi * kPi));
  CHECK(dirichlet_cube_kinetic_sum(1, 2, 3) == doctest::Approx(3 * kPi * kPi / (2 * 3 * 4)));

  // Brute force over a generous cube.
  std::vector<std::int64_t> all;
  for (int a = 1; a <= 20; ++a)
    for (int b = 1; b <= 20; ++b)
      for (int c = 1; c <= 20; ++c)
        all.push_back(a * a + b * b + c * c);
  std::sort(all.begin(), all.end());
  const auto low = lowest_dirichlet_modes(3, 500);
  for (std::size_t i = 0; i < 500; ++i)
    CHECK(low[i] == all[i]);

  CHECK(lowest_dirichlet_modes(1, 4) == std::vector<std::int64_t>{1, 4, 9, 16});
  CHECK(lowest_dirichlet_modes(2, 3) == std::vector<std::int64_t>{2, 5, 5});

  std::vector<double> Ns, sums;
  for (std::int64_t N : {125, 250, 500, 1000, 2000, 4000}) {
    Ns.push_back(static_cast<double>(N));
    sums.push_back(dirichlet_cube_kinetic_sum(N, 1, 1));
  }
  const double e = fitted_exponent(Ns, sums);
  CHECK(e >= 1.60);
  CHECK(e <= 1.73);
  CHECK_THROWS_AS(dirichlet_cube_kinetic_sum(0, 1, 1), DomainError);
}

TEST_CASE("Dirichlet sums dominate the box bound at the phase-space constant") {
  const auto p = default_parameters(1.0);
  for (double side : {0.5, 1.0, 3.0})
    for (std::int64_t N : {1, 2, 7, 30, 100, 1000, 5000})
      CHECK(dirichlet_cube_kinetic_sum(N, side, 1.0) >=
            box_kinetic_lower_bound(N, side * side * side, p));
}
