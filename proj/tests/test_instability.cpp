#include "qcg/errors.hpp"
#include "qcg/instability.hpp"
#include "qcg/numerics.hpp"

#include <doctest.h>

#include <cmath>

using namespace qcg;
using namespace qcg::inst;

namespace {
const double kRoot2OverPi = std::sqrt(2 / kPi);

// 1D slice of the correlated state, |d/dx1 psi|^2 and |x1 - x2|^2 by a 2D
// midpoint sum; the 3D state factorises into three copies of this.
struct SliceMoments {
  double p2, r2;
};
SliceMoments correlated_slice(double b, double c) {
  const int n = 800;
  const double L = 12 * std::max(b, c), h = 2 * L / n;
  auto g = [](double w, double x) { return std::pow(kPi * w * w, -0.25) * std::exp(-x * x / (2 * w * w)); };
  auto dg = [&](double w, double x) { return -x / (w * w) * g(w, x); };
  double norm = 0, p2 = 0, r2 = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x1 = -L + (i + 0.5) * h, x2 = -L + (j + 0.5) * h;
      const double R = (x1 + x2) / 2, r = x1 - x2;
      const double psi = g(b, R) * g(c, r);
      const double d = 0.5 * dg(b, R) * g(c, r) + g(b, R) * dg(c, r);
      norm += psi * psi;
      p2 += d * d;
      r2 += r * r * psi * psi;
    }
  return {p2 / norm, r2 / norm};
}
} // namespace

TEST_CASE("Gaussian moments against closed forms and a direct slice integral") {
  for (double s2 : {0.1, 1.0, 7.5}) {
    CHECK(relativistic_kinetic(s2, 0) == doctest::Approx(2 * std::sqrt(s2) * kRoot2OverPi).epsilon(1e-12));
    for (double m : {1e2, 1e4}) {
      const double nr = 1.5 * s2 / m;
      CHECK(std::abs(relativistic_kinetic(s2, m) / nr - 1) < 1e-2);
    }
  }
  for (double v : {0.3, 2.0})
    CHECK(inverse_distance(v) == doctest::Approx(kRoot2OverPi / std::sqrt(v)).epsilon(1e-12));

  for (auto [b, c] : {std::pair{1.0, 1.0}, {0.6, 1.7}, {2.5, 0.8}}) {
    const auto t = TwoBodyTrialState::correlated(b, c);
    const auto sl = correlated_slice(b, c);
    CHECK(t.momentum_variance() == doctest::Approx(sl.p2).epsilon(1e-6));
    CHECK(t.relative_variance() == doctest::Approx(sl.r2).epsilon(1e-6));
  }
  // g_a(r1) g_a(r2) is the correlated state with b = a / sqrt 2, c = sqrt 2 a
  const double a = 1.3;
  const auto s = TwoBodyTrialState::separable(a);
  const auto cs = TwoBodyTrialState::correlated(a / std::sqrt(2.0), std::sqrt(2.0) * a);
  CHECK(s.momentum_variance() == doctest::Approx(cs.momentum_variance()).epsilon(1e-14));
  CHECK(s.relative_variance() == doctest::Approx(cs.relative_variance()).epsilon(1e-14));
}

TEST_CASE("two-body energy properties") {
  const auto t = TwoBodyTrialState::correlated(0.9, 1.4);
  CHECK(relativistic_two_body_energy(t, 0, 1, 1).total() > 0);
  CHECK(relativistic_two_body_energy(t, 0, 0, 1).total() > 0);

  for (double ell : {0.01, 0.5, 3.0, 200.0}) {
    const double lhs = ell * relativistic_two_body_energy(t, 1.7, 1, ell).total();
    const double rhs = relativistic_two_body_energy(t, 1.7, ell, 1).total();
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
  }

  // affine in Q
  const double e0 = relativistic_two_body_energy(t, 0, 0.5, 1).total();
  const double e1 = relativistic_two_body_energy(t, 1, 0.5, 1).total();
  const double e3 = relativistic_two_body_energy(t, 3, 0.5, 1).total();
  CHECK(e3 == doctest::Approx(e0 + 3 * (e1 - e0)).epsilon(1e-12));

  // massless scaling: ell E(psi_ell) independent of ell
  const double m0 = relativistic_two_body_energy(t, 2.2, 0, 1).total();
  for (double ell : {1e-3, 10.0})
    CHECK(ell * relativistic_two_body_energy(t, 2.2, 0, ell).total() ==
          doctest::Approx(m0).epsilon(1e-12));

  const auto r = relativistic_two_body_energy(t, 1, 1, 1);
  CHECK(r.term("kinetic_1") == r.term("kinetic_2"));
  CHECK(r.term("coulomb") < 0);

  CHECK_THROWS_AS(relativistic_two_body_energy(t, -1, 1, 1), DomainError);
  CHECK_THROWS_AS(relativistic_two_body_energy(t, 1, 1, 0), DomainError);
  CHECK_THROWS_AS(TwoBodyTrialState::separable(0), DomainError);
  CHECK_THROWS_AS(TwoBodyTrialState::correlated(1, -1), DomainError);
}

TEST_CASE("critical charge bisection") {
  const auto sep = critical_charge_upper_bound(separable_family({0.2, 1.0, 5.0}));
  CHECK(sep.Q_hi - sep.Q_lo <= 1e-6);
  CHECK(sep.Q_lo <= 2 * std::sqrt(2.0));
  CHECK(sep.Q_hi >= 2 * std::sqrt(2.0) - 1e-12);
  CHECK(sep.Q_upper == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-6));
  CHECK(sep.ratio_min == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-10));

  double prev = sep.Q_upper;
  for (double bmax : {1.0, 10.0, 100.0, 1000.0}) {
    const auto cor = critical_charge_upper_bound(correlated_family({0.5, bmax}, {0.5, 1.0}));
    const double exact = 4 * std::sqrt(0.25 + 0.5 * 0.5 / (16 * bmax * bmax));
    CHECK(cor.Q_upper <= prev + 1e-6);
    CHECK(cor.Q_upper == doctest::Approx(exact).epsilon(1e-6));
    CHECK(cor.Q_upper >= 2);
    prev = cor.Q_upper;
  }
  CHECK(prev < 2 + 1e-5);

  // energy sign flips across the bracket
  const auto fam = correlated_family({3.0}, {1.0});
  const auto cc = critical_charge_upper_bound(fam);
  CHECK(relativistic_two_body_energy(fam[0], cc.Q_lo, 0, 1).total() >= -1e-12);
  CHECK(relativistic_two_body_energy(fam[0], cc.Q_hi, 0, 1).total() < 0);

  CHECK_THROWS_AS(critical_charge_upper_bound({}), DomainError);
}

TEST_CASE("fermionic collapse in three dimensions") {
  std::vector<std::int64_t> Ns;
  for (std::int64_t N = 100; N <= 100000; N = std::int64_t(N * 1.6) + 1)
    Ns.push_back(N);
  const auto rep = attractive_collapse_experiment(Ns, 1.0, 1.0, 3);
  CHECK(rep.side == doctest::Approx(2 / std::sqrt(3.0)));
  CHECK(rep.target_exponent == doctest::Approx(5.0 / 3));
  CHECK(rep.kinetic_exponent >= 1.62);
  CHECK(rep.kinetic_exponent <= 1.72);
  REQUIRE(rep.N_negative.has_value());
  CHECK(rep.tail_slope < 0);
  CHECK(rep.conclusion == "unstable");
  CHECK(rep.rows.back().estimate < rep.rows.front().estimate);

  // sum / N^{5/3} settles over the top decade
  double lo = 1e300, hi = 0;
  for (const auto &r : rep.rows)
    if (r.N >= rep.rows.back().N / 10) {
      const double q = r.kinetic / std::pow(double(r.N), 5.0 / 3);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  CHECK(hi / lo - 1 < 0.05);

  for (const auto &r : rep.rows)
    CHECK(r.estimate == doctest::Approx(r.kinetic / r.N - 0.5 * (r.N - 1) * 1.0));
}

TEST_CASE("collapse experiment in low dimensions and input checks") {
  const auto one = attractive_collapse_experiment({10, 100, 1000, 5000}, 1.0, 1.0, 1);
  CHECK(one.conclusion == "inconclusive");
  CHECK(!one.N_negative.has_value());
  CHECK(one.tail_slope > 0);
  // one dimension: per-particle kinetic grows like N^2
  CHECK(one.kinetic_exponent == doctest::Approx(3.0).epsilon(0.02));

  const auto two = attractive_collapse_experiment({10, 100, 1000, 10000}, 1.0, 50.0, 2);
  CHECK(two.conclusion == "inconclusive");

  CHECK_THROWS_AS(attractive_collapse_experiment({10, 20}, 1, 1, 4), DomainError);
  CHECK_THROWS_AS(attractive_collapse_experiment({10, 20}, 1, 1, 0), DomainError);
  CHECK_THROWS_AS(attractive_collapse_experiment({20, 10}, 1, 1, 3), DomainError);
  CHECK_THROWS_AS(attractive_collapse_experiment({10, 20}, 1, 1, 3,
                                                 [](double r) { return -1.0 + r; }),
                  DomainError);
  CHECK_NOTHROW(attractive_collapse_experiment({10, 20}, 1, 1, 3, [](double) { return -2.0; }));
}
