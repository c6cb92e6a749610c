#include "oracles.hpp"
#include "qcg/bogoliubov.hpp"
#include "qcg/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qcg;
using namespace qcg::bog;

namespace {

PairExcitationSpec spec(std::vector<double> lambdas, double N, std::vector<double> xi = {}) {
  PairExcitationSpec s;
  s.n_modes = lambdas.size();
  s.lambdas = std::move(lambdas);
  s.sqrt_N = std::sqrt(N);
  s.xi = std::move(xi);
  return s;
}

double gauss(double w, double r) { return std::pow(kPi * w * w, -0.75) * std::exp(-r * r / (2 * w * w)); }

CondensateProfile gaussian_condensate(double w, double N, std::size_t nodes = 3000) {
  return CondensateProfile::from_function([&](double r) { return gauss(w, r); },
                                          uniform_grid(0, 12 * w, nodes), N);
}

Eigen::MatrixXd random_psd(std::mt19937_64 &rng, int n) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      B(i, j) = nd(rng);
  return 0.3 * B * B.transpose() / n;
}

} // namespace

TEST_CASE("gamma from pair parameters") {
  CHECK(gamma_from_spec(spec({0, 0, 0}, 0)).entries().isZero(0));
  CHECK(gamma_from_spec(spec({0.5}, 0)).entries()(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  const auto g = gamma_from_spec(spec({0.2, 0.9}, 0)).entries();
  CHECK(g(1, 1) == doctest::Approx(0.81 / 0.19));
  CHECK(g(0, 1) == 0);
  CHECK(gamma_from_spec(spec({kLambdaMax}, 0)).entries()(0, 0) > 4e5);
  CHECK_THROWS_AS(gamma_from_spec(spec({1 - 1e-7}, 0)), DomainError);
  CHECK_THROWS_AS(gamma_from_spec(spec({-0.1}, 0)), DomainError);
  CHECK_THROWS_AS(gamma_from_spec(spec({0.1}, 1.0, {0.5})), DomainError);
}

TEST_CASE("truncated Fock oracle matches the pair-state formulas") {
  SUBCASE("pure condensate number statistics") {
    const auto r = fock_oracle(spec({0}, 4, {1}));
    CHECK(r.oracle.number_mean == doctest::Approx(4).epsilon(1e-10));
    CHECK(r.oracle.number_variance == doctest::Approx(4).epsilon(1e-9));
    const auto r3 = fock_oracle(spec({0, 0, 0}, 4, {0.6, 0.0, 0.8}));
    CHECK(r3.oracle.number_mean == doctest::Approx(4).epsilon(1e-10));
    CHECK(r3.oracle.number_variance == doctest::Approx(4).epsilon(1e-9));
  }
  SUBCASE("single squeezed mode") {
    const auto r = fock_oracle(spec({0.5}, 0));
    CHECK(r.oracle.one_pdm(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(r.oracle.pair(0, 0) == doctest::Approx(-2.0 / 3).epsilon(1e-9));
    CHECK(r.norm_deficit < 1e-12);
  }
  SUBCASE("four-point function of a displaced squeezed mode") {
    const auto r = fock_oracle(spec({0.3}, 2, {1}));
    const double g = 0.09 / 0.91, s = std::sqrt(g * (g + 1));
    CHECK(std::abs(r.oracle.four_point(0, 0) - (s * s + 2 * g * g)) < 1e-8);
    CHECK(r.max_deviation() < 1e-8);
  }
  SUBCASE("random three-mode states") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0, 0.6);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 8; ++t) {
      std::vector<double> xi{nd(rng), nd(rng), nd(rng)};
      const double nrm = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
      for (double &x : xi)
        x /= nrm;
      const auto s = spec({U(rng), U(rng), U(rng)}, 3 * U(rng), xi);
      const auto r = fock_oracle(s, 40);
      CHECK(r.max_deviation() < 1e-7);
      // number variance departs from the mean once pairs are present
      CHECK(r.oracle.number_variance != doctest::Approx(r.oracle.number_mean));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fock_oracle(spec({0.95}, 0), 10), TruncationError);
    CHECK_THROWS_AS(fock_oracle(spec({0.1, 0.1, 0.1, 0.1}, 0)), DomainError);
    CHECK_THROWS_AS(fock_oracle(spec({0.1}, 1, {1}), 1), DomainError);
  }
}

TEST_CASE("condensate profile and oscillator basis") {
  const auto c = gaussian_condensate(1.3, 7);
  CHECK(radial_norm2(c.xi0()) == doctest::Approx(1).epsilon(1e-13));
  CHECK(c.charge_component(0.4) == doctest::Approx(std::sqrt(0.5) * c.xi0()(0.4)));
  CHECK(c.gradient_norm2() == doctest::Approx(3 / (2 * 1.3 * 1.3)).epsilon(1e-6));
  CHECK_THROWS_AS(CondensateProfile(RadialGridFunction({0, 1, 2, 3}, {1, 1, 1, 1}), 1), DomainError);
  CHECK_THROWS_AS(CondensateProfile(c.xi0(), 0), DomainError);

  const double w = 0.8;
  const auto b = oscillator_s_basis(6, w, 20);
  b.check_orthonormal();
  const auto L = b.laplacian();
  for (int k = 0; k < 6; ++k)
    CHECK(L(k, k) == doctest::Approx((2 * k + 1.5) / (w * w)).epsilon(1e-10));

  auto bad = b;
  bad.f[2] = [&](double r) { return 1.01 * b.f[2](r); };
  CHECK_THROWS_AS(bad.check_orthonormal(), BasisError);
}

TEST_CASE("Coulomb kernel and expectation") {
  const double a = 1.1, w = 0.9;
  const auto c = gaussian_condensate(a, 5);
  const auto basis = oscillator_s_basis(6, w, 14);
  const auto K = coulomb_kernel_matrix(c, basis);

  // u_0 xi0 is a Gaussian charge of total Q and width s: self-energy Q^2 / (sqrt(pi) s)
  const double s = 1 / std::sqrt(1 / (a * a) + 1 / (w * w));
  const double Q = std::pow(kPi * a * a, -0.75) * std::pow(kPi * w * w, -0.75) * std::pow(2 * kPi * s * s, 1.5);
  CHECK(K(0, 0) == doctest::Approx(Q * Q / (std::sqrt(kPi) * s)).epsilon(1e-7));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);

  CHECK(coulomb_expectation_finite_basis(c, PsdMatrix(Eigen::MatrixXd::Zero(6, 6)), basis) == 0);

  Eigen::MatrixXd r1 = Eigen::MatrixXd::Zero(6, 6);
  r1(2, 2) = 0.7;
  const double e1 = coulomb_expectation_finite_basis(c, PsdMatrix(r1), basis);
  CHECK(e1 == doctest::Approx(5 * (0.7 - std::sqrt(0.7 * 1.7)) * K(2, 2)).epsilon(1e-12));
  CHECK(e1 < 0);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 3; ++t) {
    const Eigen::MatrixXd g = random_psd(rng, 6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(g);
    double ref = 0;
    for (int k = 0; k < 6; ++k) {
      const double l = std::max(eg.eigenvalues()[k], 0.0);
      const Eigen::VectorXd v = eg.eigenvectors().col(k);
      ref += (l - std::sqrt(l * (l + 1))) * v.dot(K * v);
    }
    CHECK(coulomb_expectation_finite_basis(c, PsdMatrix(g), basis) ==
          doctest::Approx(5 * ref).epsilon(1e-10));

    const auto rep = total_energy_expectation(c, PsdMatrix(g), basis);
    CHECK(rep.term("pair_kinetic") >= 0);
    CHECK(rep.term("coulomb") <= 0);
    CHECK(rep.all_checks_pass());
  }

  const auto r0 = total_energy_expectation(c, PsdMatrix(Eigen::MatrixXd::Zero(6, 6)), basis);
  CHECK(r0.term("pair_kinetic") == 0);
  CHECK(r0.term("coulomb") == 0);
  CHECK(r0.total() == doctest::Approx(0.5 * 5 * 3 / (2 * a * a)).epsilon(1e-6));

  CHECK_THROWS_AS(coulomb_expectation_finite_basis(c, PsdMatrix(Eigen::MatrixXd::Zero(3, 3)), basis),
                  DomainError);
  auto bad = basis;
  bad.f[0] = [](double) { return 0.0; };
  CHECK_THROWS_AS(coulomb_expectation_finite_basis(c, PsdMatrix(Eigen::MatrixXd::Zero(6, 6)), bad),
                  BasisError);
}

TEST_CASE("pointwise dispersion minimum") {
  CHECK(bogoliubov_dispersion_min(3, 0).e_min == 0);
  CHECK(bogoliubov_dispersion_min(3, 0).f_star == 0);
  CHECK(bogoliubov_dispersion_min(0, 0).e_min == 0);
  CHECK(bogoliubov_dispersion_min(0, 2).e_min == -1);
  CHECK(std::isinf(bogoliubov_dispersion_min(0, 2).f_star));
  CHECK_THROWS_AS(bogoliubov_dispersion_min(-1, 1), DomainError);

  CHECK(std::abs(bogoliubov_dispersion_min(1, 1).e_min - oracle::dispersion_scan(1, 1)) < 1e-10);

  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double tau = std::pow(10.0, -3 + 6.0 * i / 19), g = std::pow(10.0, -3 + 6.0 * j / 19);
      const auto d = bogoliubov_dispersion_min(tau, g);
      CHECK(d.e_min <= 0);
      CHECK(std::abs(d.e_min - oracle::dispersion_scan(tau, g)) <= 1e-10 * std::max(1.0, std::abs(d.e_min)));
      // the minimiser attains the minimum
      const double f = d.f_star;
      CHECK(tau * f + g * (f - std::sqrt(f * (f + 1))) == doctest::Approx(d.e_min).epsilon(1e-9));
      CHECK(bogoliubov_dispersion_min(tau, 1.1 * g).e_min <= d.e_min);
    }

  for (double ratio : {1e2, 1e3}) {
    const double g = 0.7, tau = ratio * g;
    CHECK(bogoliubov_dispersion_min(tau, g).e_min / (-g * g / (4 * tau)) ==
          doctest::Approx(1).epsilon(2.0 / ratio));
  }
}

TEST_CASE("I0 constant") {
  const auto v = compute_I0();
  // direct integration of the unsimplified integrand with a long double tail cut
  auto raw = [](double x) {
    const long double X = x;
    return double(1 + X * X * X * X - X * X * std::sqrt(X * X * X * X + 2));
  };
  CHECK(raw(0) == 1);
  CHECK(raw(30) * 2 * std::pow(30.0, 4) == doctest::Approx(1).epsilon(1e-5));
  const double direct = std::pow(2 / kPi, 0.75) * (integrate(raw, 0, 30, 1e-12) + 1 / (6 * 27000.0));
  CHECK(v.quadrature == doctest::Approx(direct).epsilon(1e-8));
  CHECK(v.closed_form == doctest::Approx(std::pow(4.0, 1.25) * std::tgamma(0.75) /
                                         (5 * std::pow(kPi, 0.25) * std::tgamma(1.25)))
                             .epsilon(1e-14));
  // the two printed expressions differ by exactly a factor of two
  CHECK(v.closed_form / v.quadrature == doctest::Approx(2).epsilon(1e-12));
}

TEST_CASE("semiclassical momentum integral") {
  const double I0 = compute_I0().quadrature;
  for (double n : {1e-2, 1.0, 1e2}) {
    const double ratio = semiclassical_p_integral(n, 1) / std::pow(n, 1.25);
    CHECK(ratio == doctest::Approx(-I0).epsilon(1e-6));
  }
  CHECK(semiclassical_p_integral(0.5, 4) == doctest::Approx(semiclassical_p_integral(2, 1)).epsilon(1e-12));
  CHECK(semiclassical_p_integral(0, 3) == 0);
  CHECK(std::abs(semiclassical_p_integral(1e-12, 1)) < 1e-14);
  CHECK_THROWS_AS(semiclassical_p_integral(-1, 1), DomainError);

  // integrating the pointwise bound over a Gaussian condensate reproduces -I0 N^{5/4} int xi0^{5/2}
  const double w = 1.2, N = 30;
  const double lhs = integrate(
      [&](double r) { return 4 * kPi * r * r * semiclassical_p_integral(gauss(w, r) * gauss(w, r), N); }, 0,
      12 * w, 1e-9);
  const double P = integrate([&](double r) { return 4 * kPi * r * r * std::pow(gauss(w, r), 2.5); }, 0, 12 * w);
  CHECK(lhs == doctest::Approx(-I0 * std::pow(N, 1.25) * P).epsilon(1e-7));
}

TEST_CASE("Dyson variational problem") {
  const double I0 = compute_I0().quadrature;

  SUBCASE("scaling identity") {
    auto phi = [](double r) { return std::pow(1 + r * r, -2.0) * 0.1; };
    auto dphi = [](double r) { return -0.4 * r * std::pow(1 + r * r, -3.0); };
    const auto t1 = dyson_terms(phi, dphi, 400);
    for (double sg : {0.5, 2.0, 3.7}) {
      auto ps = [&](double r) { return std::pow(sg, 1.5) * phi(sg * r); };
      auto dps = [&](double r) { return std::pow(sg, 2.5) * dphi(sg * r); };
      const auto ts = dyson_terms(ps, dps, 400 / sg);
      CHECK(ts.energy(I0) == doctest::Approx(sg * sg * 0.5 * t1.K - std::pow(sg, 0.75) * I0 * t1.P).epsilon(1e-10));
    }
  }

  const auto st = dyson_variational_solve(DysonGrid{}, I0, [](double r) { return std::exp(-r * r / 50); });
  CHECK(st.energy < 0);
  CHECK(st.virial_residual < 1e-3);
  CHECK(st.energy == doctest::Approx(-(5.0 / 3) * 0.5 * st.K).epsilon(1e-3));
  CHECK(st.gradient_residual <= 1e-8);
  CHECK(dyson_discrete_terms(st.grid, st.u).norm2 == doctest::Approx(1).epsilon(1e-12));
  for (double x : st.u)
    CHECK(x >= 0);
  for (std::size_t i = 1; i < st.energy_trace.size(); ++i)
    CHECK(st.energy_trace[i] <= st.energy_trace[i - 1] + 1e-15);
  // Euler-Lagrange multiplier: mu = K - (5/2) I0 P
  CHECK(st.multiplier == doctest::Approx(st.K - 2.5 * I0 * st.P).epsilon(1e-6));

  // the continuous functional of the interpolated minimiser
  const auto phi = st.phi();
  CHECK(radial_norm2(phi) == doctest::Approx(1).epsilon(1e-4));

  const auto fine = dyson_variational_solve(DysonGrid{120, 4001}, I0,
                                            [](double r) { return 1 / (1 + r * r); });
  CHECK(std::abs(fine.energy / st.energy - 1) < 1e-3);
  const auto wide = dyson_variational_solve(DysonGrid{180, 3001}, I0, [](double r) { return std::exp(-r / 4); });
  CHECK(std::abs(wide.energy / st.energy - 1) < 1e-3);

  DysonOptions one;
  one.max_iter = 1;
  CHECK_THROWS_AS(dyson_variational_solve(DysonGrid{}, I0, [](double r) { return std::exp(-r); }, one),
                  ConvergenceError);
  CHECK_THROWS_AS(dyson_variational_solve(DysonGrid{}, I0, [](double r) { return std::cos(r); }), DomainError);

  SUBCASE("pipeline rescaling") {
    const auto rep = dyson_pipeline({10, 1e3, 1e6}, st);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.max_ratio_spread < 1e-10);
    for (const auto &r : rep.rows) {
      CHECK(r.ratio == doctest::Approx(st.energy).epsilon(1e-10));
      CHECK(r.length_scale * std::pow(r.N, 0.2) == doctest::Approx(st.rms_radius()).epsilon(1e-10));
      CHECK(r.potential < 0);
      CHECK(r.condensate_kinetic > 0);
    }
    CHECK(rep.rows[2].length_scale < rep.rows[0].length_scale);
    CHECK_THROWS_AS(dyson_pipeline({10, -1}, st), DomainError);
  }
}
