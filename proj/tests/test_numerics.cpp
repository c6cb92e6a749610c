#include "qcg/errors.hpp"
#include "qcg/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qcg;

TEST_CASE("legendre transform of the nonrelativistic kinetic energy") {
  const auto T = sample_function([](double p) { return 0.5 * p * p; },
                                 uniform_grid(-5, 5, 2001));
  CHECK(legendre_transform(T, 0.6) == doctest::Approx(0.18).epsilon(1e-10));
  CHECK(legendre_transform(T, -1.3) == doctest::Approx(0.5 * 1.69).epsilon(1e-10));
}

TEST_CASE("legendre transform of the relativistic kinetic energy") {
  const KineticProfile K(KineticProfile::Kind::relativistic, 1.0);
  const auto T = sample_function([&](double p) { return K.energy(p); },
                                 uniform_grid(-60, 60, 24001));
  CHECK(legendre_transform(T, 0.6) == doctest::Approx(0.2).epsilon(1e-7));
  CHECK(K.legendre_dual(0.6) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK_THROWS_AS(K.legendre_dual(1.0), DomainError);
}

TEST_CASE("double legendre transform returns the original function") {
  const auto T = sample_function([](double p) { return 0.5 * p * p; },
                                 uniform_grid(-4, 4, 1601));
  const auto vs = uniform_grid(-3.9, 3.9, 781);
  const auto Tstar = sample_function([&](double v) { return legendre_transform(T, v); }, vs);
  for (double p : {-2.0, -0.7, 0.0, 0.33, 1.5, 2.9})
    CHECK(legendre_transform(Tstar, p) == doctest::Approx(0.5 * p * p).epsilon(1e-6));
}

TEST_CASE("legendre transform output is convex in v") {
  const KineticProfile K(KineticProfile::Kind::relativistic, 2.0);
  const auto T = sample_function([&](double p) { return K.energy(p); },
                                 uniform_grid(-50, 50, 5001));
  const auto vs = uniform_grid(-0.9, 0.9, 91);
  std::vector<double> g;
  for (double v : vs)
    g.push_back(legendre_transform(T, v));
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    CHECK(g[i + 1] - 2 * g[i] + g[i - 1] >= -1e-9);
}

TEST_CASE("legendre transform errors") {
  const auto concave = sample_function([](double p) { return -p * p; },
                                       uniform_grid(-1, 1, 21));
  CHECK_THROWS_AS(legendre_transform(concave, 0.0), ConvexityError);
  const auto T = sample_function([](double p) { return 0.5 * p * p; },
                                 uniform_grid(-1, 1, 21));
  CHECK_THROWS_AS(legendre_transform(T, 5.0), DomainError);
}

TEST_CASE("radial Fourier transform of a Gaussian") {
  const auto f = RadialGridFunction::sample([](double r) { return std::exp(-0.5 * r * r); },
                                            uniform_grid(0, 12, 1201));
  for (double k : {0.1, 0.5, 1.0, 2.0, 3.5}) {
    const double oracle = std::pow(2 * kPi, 1.5) * std::exp(-0.5 * k * k);
    CHECK(radial_fourier_transform(f, k) == doctest::Approx(oracle).epsilon(1e-7));
  }
}

TEST_CASE("radial Fourier transform of a Yukawa profile") {
  for (double eps : {0.5, 0.2, 0.05}) {
    const double R = 40.0 / eps;
    const auto f = RadialGridFunction::sample(
        [&](double r) { return std::exp(-eps * r) / r; }, geometric_grid(1e-6, R, 4000));
    for (double k : {0.5, 1.0, 2.0}) {
      const double oracle = 4 * kPi / (k * k + eps * eps);
      CHECK(radial_fourier_transform(f, k) == doctest::Approx(oracle).epsilon(1e-5));
      CHECK(radial_fourier_transform(f, k) > 0);
    }
  }
}

TEST_CASE("radial Fourier transform: zero, linearity, tails") {
  const auto grid = uniform_grid(0, 10, 501);
  const auto zero = RadialGridFunction::sample([](double) { return 0.0; }, grid);
  CHECK(radial_fourier_transform(zero, 1.3) == 0.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  const double a = u(rng), b = u(rng);
  auto f1 = [](double r) { return std::exp(-r * r); };
  auto f2 = [](double r) { return std::exp(-r) * (1 + r); };
  const auto F1 = RadialGridFunction::sample(f1, grid);
  const auto F2 = RadialGridFunction::sample(f2, grid);
  const auto F12 = RadialGridFunction::sample([&](double r) { return a * f1(r) + b * f2(r); },
                                              grid);
  for (double k : {0.3, 1.1, 2.7}) {
    const double lhs = radial_fourier_transform(F12, k);
    const double rhs = a * radial_fourier_transform(F1, k) + b * radial_fourier_transform(F2, k);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }

  const auto bad = RadialGridFunction::sample([](double r) { return 1 / r; },
                                              uniform_grid(1, 10, 50), PowerLawTail{-1.0});
  CHECK_THROWS_AS(radial_fourier_transform(bad, 1.0), TailError);

  // 1/r^3 outside r = 1 with an analytic power-law tail beyond r = 5.
  auto h = [](double r) { return r < 1 ? 1.0 : 1.0 / (r * r * r); };
  const auto H_tail = RadialGridFunction::sample(h, uniform_grid(0, 5, 2001), PowerLawTail{-3});
  const auto H_long = RadialGridFunction::sample(h, uniform_grid(0, 400, 160001));
  // Reference: long grid plus the analytic remainder estimate (|tail| < 1/(k 400^2)).
  CHECK(radial_fourier_transform(H_tail, 1.0) ==
        doctest::Approx(radial_fourier_transform(H_long, 1.0)).epsilon(2e-4));
}

TEST_CASE("psd square root") {
  const PsdMatrix I(Eigen::MatrixXd::Identity(4, 4));
  CHECK((psd_sqrt(I).entries() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-15);

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 9;
  const auto s = psd_sqrt(PsdMatrix(d)).entries();
  CHECK(s(0, 0) == doctest::Approx(2));
  CHECK(s(1, 1) == doctest::Approx(3));
  CHECK(std::abs(s(0, 1)) < 1e-15);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd A(8, 8);
    for (Eigen::Index i = 0; i < 64; ++i)
      A.data()[i] = g(rng);
    const Eigen::MatrixXd M = A.transpose() * A;
    const PsdMatrix P(M);
    const Eigen::MatrixXd S = psd_sqrt(P).entries();
    CHECK((S * S - M).norm() < 1e-10);
    const double eps = std::numeric_limits<double>::epsilon();
    CHECK((S * M - M * S).norm() < 8 * eps * M.norm() * M.norm() * 10);
  }
}

TEST_CASE("psd validation") {
  Eigen::MatrixXd neg = Eigen::MatrixXd::Identity(3, 3);
  neg(2, 2) = -0.1;
  CHECK_THROWS_AS(PsdMatrix{neg}, NotPsdError);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(PsdMatrix{asym}, NotPsdError);
  // Tiny negative eigenvalues inside the tolerance are clamped.
  Eigen::MatrixXd tiny = Eigen::MatrixXd::Identity(2, 2);
  tiny(1, 1) = -1e-13;
  const auto s = psd_sqrt(PsdMatrix(tiny)).entries();
  CHECK(s(1, 1) == 0.0);
}

TEST_CASE("gamma function") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-1.5), DomainError);
  for (double x = 0.1; x <= 10.0; x += 0.0731)
    CHECK(gamma_fn(x + 1) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-11));
}

TEST_CASE("radial grid function") {
  CHECK_THROWS_AS(RadialGridFunction({0.0, 1.0, 1.0}, {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(RadialGridFunction({-1.0, 1.0}, {1, 2}), DomainError);
  CHECK_THROWS_AS(RadialGridFunction({0.0, 1.0}, {1, NAN}), DomainError);
  const RadialGridFunction lin({0.0, 1.0}, {1.0, 3.0});
  CHECK(lin(0.5) == doctest::Approx(2.0));
  CHECK(lin(2.0) == 0.0);
  const RadialGridFunction tail({1.0, 2.0}, {1.0, 0.5}, PowerLawTail{-2});
  CHECK(tail(4.0) == doctest::Approx(0.125));
  const auto g = geometric_grid(1e-3, 10, 50);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 10);
  for (std::size_t i = 1; i < g.size(); ++i)
    CHECK(g[i] > g[i - 1]);
}

TEST_CASE("quadrature wrappers") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0, kPi) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate_singular([](double x) { return 1 / std::sqrt(x); }, 0, 1) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(gauss_legendre10([](double x) { return std::pow(x, 19); }, 0, 1) ==
        doctest::Approx(0.05).epsilon(1e-14));
}
