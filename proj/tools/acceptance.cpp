// Acceptance runner: evaluates the twelve acceptance criteria and prints one
// PASS/FAIL line per criterion. Exit status 0 iff every selected criterion passes.

#include "oracles.hpp"
#include "qcg/bogoliubov.hpp"
#include "qcg/coulomb.hpp"
#include "qcg/errors.hpp"
#include "qcg/graf_schenker.hpp"
#include "qcg/instability.hpp"
#include "qcg/kernels.hpp"
#include "qcg/lieb_thirring.hpp"
#include "qcg/operator_checks.hpp"
#include "qcg/thermo_limit.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qcg;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240607;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      note("FAILED " + what);
    }
  }
  void note(const std::string &s) {
    if (!detail.empty())
      detail += "; ";
    detail += s;
  }
};

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}
std::string sci(double v) { return fmt("%.3e", v); }

struct Criterion {
  int id;
  std::string name;
  double time_limit; // seconds
  std::function<Outcome(std::uint64_t)> run;
};

// ---------------------------------------------------------------------------

Outcome i0_identity(std::uint64_t) {
  Outcome o;
  const auto v = bog::compute_I0();
  const double rel = std::abs(v.quadrature - v.closed_form) / std::abs(v.closed_form);
  o.note("quadrature=" + fmt("%.15g", v.quadrature) + " closed_form=" + fmt("%.15g", v.closed_form) +
         " rel_diff=" + sci(rel));
  o.require(rel < 1e-8, "rel_diff < 1e-8");
  return o;
}

Outcome semiclassical(std::uint64_t) {
  Outcome o;
  const double I0 = bog::compute_I0().quadrature;
  double worst = 0;
  for (double n : {1e-2, 1e-1, 1.0, 1e1, 1e2}) {
    const double ratio = bog::semiclassical_p_integral(n, 1) / std::pow(n, 1.25);
    worst = std::max(worst, std::abs(ratio + I0));
  }
  o.note("max |ratio + I0| over N*density in [1e-2, 1e2] = " + sci(worst));
  o.require(worst < 1e-5, "ratio = -I0 within 1e-5");
  return o;
}

Outcome onsager(std::uint64_t seed) {
  Outcome o;
  const auto r = coulomb::onsager_sweep(10000, seed);
  o.note("configurations=" + std::to_string(r.configurations) +
         " violations=" + std::to_string(r.violations) +
         " chain_violations=" + std::to_string(r.chain_violations) +
         " disjoint_pairs=" + std::to_string(r.disjoint_pairs_checked) +
         " max_pair_error=" + sci(r.max_disjoint_pair_error));
  o.require(r.configurations == 10000, "10^4 configurations");
  o.require(r.violations == 0 && r.chain_violations == 0, "zero violations");
  o.require(r.disjoint_pairs_checked > 0 && r.max_disjoint_pair_error < 1e-10,
            "disjoint pairs exact to 1e-10");
  return o;
}

Outcome newton(std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(kernels::mix_seed(seed, 4));
  std::uniform_real_distribution<double> ud(0.05, 3.0), ur(0.0, 2.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double delta = ud(rng);
    const double r = ur(rng) * delta; // half the samples inside the ball
    const double v = coulomb::newton_smeared_potential(delta, r);
    const double ref = oracle::newton_ball_average(delta, r);
    worst = std::max(worst, std::abs(v - ref) / std::abs(ref));
  }
  double jump = 0;
  for (double delta : {0.1, 0.7, 1.0, 2.5, 13.0}) {
    const double a = delta / 2;
    const double at = coulomb::newton_smeared_potential(delta, a);
    const double below = coulomb::newton_smeared_potential(delta, std::nextafter(a, 0.0));
    jump = std::max({jump, std::abs(at - 1 / a) * a, std::abs(below - 1 / a) * a});
  }
  o.note("max rel error vs quadrature=" + sci(worst) + " branch jump=" + sci(jump));
  o.require(worst < 1e-6, "quadrature agreement 1e-6");
  o.require(jump < 1e-12, "continuity 1e-12");
  return o;
}

Outcome fock(std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(kernels::mix_seed(seed, 5));
  std::uniform_real_distribution<double> ul(0.0, 0.5), uN(0.0, 3.0);
  std::normal_distribution<double> nd;
  double worst = 0, worst_nn = 0;
  int count = 0, pure = 0;
  for (int t = 0; t < 24; ++t) {
    bog::PairExcitationSpec s;
    s.n_modes = 1 + t % 2;
    const bool condensate_only = t % 3 == 0;
    for (std::size_t a = 0; a < s.n_modes; ++a)
      s.lambdas.push_back(condensate_only ? 0.0 : ul(rng));
    const double N = uN(rng);
    s.sqrt_N = std::sqrt(N);
    double nrm = 0;
    for (std::size_t a = 0; a < s.n_modes; ++a) {
      s.xi.push_back(nd(rng));
      nrm += s.xi.back() * s.xi.back();
    }
    for (double &x : s.xi)
      x /= std::sqrt(nrm);
    const auto r = bog::fock_oracle(s, 40);
    worst = std::max(worst, r.max_deviation());
    if (condensate_only) {
      worst_nn = std::max({worst_nn, std::abs(r.oracle.number_mean - N),
                           std::abs(r.oracle.number_variance - N)});
      ++pure;
    }
    ++count;
  }
  o.note(std::to_string(count) + " specs, max moment deviation=" + sci(worst) + "; " +
         std::to_string(pure) + " pure-condensate specs, max |(mean, var) - (N, N)|=" + sci(worst_nn));
  o.require(worst < 1e-7, "moments within 1e-7");
  o.require(worst_nn < 1e-7, "(N, N) number statistics within 1e-7");
  return o;
}

Outcome dispersion(std::uint64_t) {
  Outcome o;
  double worst = 0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const double tau = std::pow(10.0, -3 + 6.0 * i / 49), g = std::pow(10.0, -3 + 6.0 * j / 49);
      const double e = bog::bogoliubov_dispersion_min(tau, g).e_min;
      worst = std::max(worst, std::abs(e - oracle::dispersion_scan(tau, g)) / std::max(1.0, std::abs(e)));
    }
  o.note("50x50 grid tau, g in [1e-3, 1e3], max deviation=" + sci(worst));
  o.require(worst < 1e-10, "golden-section agreement 1e-10");
  return o;
}

Outcome dyson(std::uint64_t) {
  Outcome o;
  const double I0 = bog::compute_I0().quadrature;
  const auto st = bog::dyson_variational_solve(bog::DysonGrid{}, I0,
                                               [](double r) { return std::exp(-r * r / 50); });
  const auto fine = bog::dyson_variational_solve(bog::DysonGrid{120, 4001}, I0,
                                                 [](double r) { return std::exp(-r * r / 50); });
  const double refine = std::abs(fine.energy / st.energy - 1);
  const auto rep = bog::dyson_pipeline({10, 1e3, 1e6}, st);
  o.note("E*=" + fmt("%.12g", st.energy) + " virial=" + sci(st.virial_residual) +
         " refinement=" + sci(refine) + " pipeline spread=" + sci(rep.max_ratio_spread));
  o.require(st.virial_residual < 1e-3, "virial < 1e-3");
  o.require(st.energy < 0, "E* < 0");
  o.require(refine < 1e-3, "refinement < 0.1%");
  o.require(rep.max_ratio_spread < 1e-10, "pipeline ratio constant to 1e-10");
  return o;
}

Outcome thermo_limit(std::uint64_t) {
  Outcome o;
  std::vector<double> Lc, Ll;
  for (int i = 0; i <= 20; ++i)
    Lc.push_back(20 + 5 * i);
  for (int i = 0; i < 20; ++i)
    Ll.push_back(40 + 10 * i);
  double worst_density = 0, worst_shape = 0;
  for (double mu : {-0.5, -1.0, -2.0}) {
    const auto em = thermo::continuum_fermion_map(mu, 1);
    const auto r = thermo::thermodynamic_extrapolation(
        em, [](double s) { return thermo::Domain::box(Vec3::Zero(), s); }, Lc);
    const double ref = oracle::free_fermion_density(mu, 1);
    worst_density = std::max(worst_density, std::abs(r.e_inf / ref - 1));

    const auto lm = thermo::lattice_fermion_map({mu, 1.0, 1.0});
    const auto box = thermo::thermodynamic_extrapolation(
        lm, [](double s) { return thermo::Domain::box(Vec3(0.25, 0.25, 0.25), s); }, Ll);
    const auto simplex = thermo::thermodynamic_extrapolation(
        lm, [](double s) { return thermo::Domain::path_simplex(Vec3(0.25, 0.75, 1.25), s); }, Ll);
    const double err = std::hypot(box.e_inf_error(), simplex.e_inf_error());
    worst_shape = std::max(worst_shape, std::abs(box.e_inf - simplex.e_inf) / (3 * err));
  }
  o.note("max density rel error=" + sci(worst_density) +
         " max |box - simplex| / (3 combined error)=" + fmt("%.3f", worst_shape));
  o.require(worst_density < 0.01, "density within 1%");
  o.require(worst_shape < 1, "shape families agree");
  return o;
}

Outcome graf_schenker(std::uint64_t seed) {
  Outcome o;
  const auto S = gs::Simplex::regular();
  const std::uint64_t n = 100000;
  auto sub = [&](std::uint64_t k) { return kernels::mix_seed(seed, 900 + k); };

  // 21 estimates of g at separation d (one axis-aligned, 20 Haar orientations);
  // each is compared with the pooled mean of the other 20.
  const double ell = 2.0, d = 0.6;
  std::vector<gs::KernelEstimate> est{
      gs::overlap_kernel(Vec3::Zero(), Vec3(d, 0, 0), S, ell, n, sub(0))};
  std::mt19937_64 rng(sub(1));
  for (int i = 0; i < 20; ++i) {
    const Vec3 dir = gs::haar_rotation(rng) * Vec3(0, 0, 1);
    const Vec3 base(0.1 * i, -0.2, 0.05 * i);
    est.push_back(gs::overlap_kernel(base, base + d * dir, S, ell, n, sub(10 + i)));
  }
  double worst_rad = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    double sum = 0, var = 0;
    for (std::size_t j = 0; j < est.size(); ++j)
      if (j != i) {
        sum += est[j].estimate;
        var += est[j].std_error * est[j].std_error;
      }
    const double m = double(est.size() - 1);
    worst_rad = std::max(worst_rad, std::abs(est[i].estimate - sum / m) /
                                        std::sqrt(est[i].std_error * est[i].std_error + var / (m * m)));
  }
  const auto same = gs::overlap_kernel(Vec3(0.3, -1, 2), Vec3(0.3, -1, 2), S, ell, n, sub(2));
  const bool g0 = std::abs(same.estimate - 1) <= 3 * same.std_error;

  const auto pt = gs::gs_positive_type_check(S, 1.0, 17, n, gs::default_k_grid(S, 1.0, 20), sub(3));

  std::mt19937_64 crng(sub(4));
  const auto c = coulomb::random_neutral_configuration(crng, {8, 8, 1.0});
  const double diam = c.diameter();
  std::vector<double> ells;
  for (double f : {2.0, 4.0, 8.0, 16.0, 32.0})
    ells.push_back(f * diam);
  const auto sl = gs::sliding_inequality_experiment(c, S, ells, n, sub(5));

  o.note("radiality max sigma=" + fmt("%.2f", worst_rad) + " g(0)=" + fmt("%.6f", same.estimate) +
         " positivity=" + pt.status_name() + " (min " + fmt("%.2f", pt.min_sigma_units) +
         " sigma) C_fit=" + fmt("%.4g", sl.C_fit) + " top_slope=" + fmt("%.3g", sl.top_slope) +
         "+-" + fmt("%.3g", sl.top_slope_se));
  o.require(worst_rad < 3, "radiality within 3 sigma");
  o.require(g0, "g(0) = 1 within 3 sigma");
  o.require(pt.status != gs::PositiveTypeReport::Status::negative, "Fourier positivity");
  o.require(std::isfinite(sl.C_fit), "D bounded above");
  o.require(sl.no_upward_trend, "no upward trend in D");
  return o;
}

Outcome lieb_thirring(std::uint64_t seed) {
  Outcome o;
  const auto p = lt::default_parameters(1.0);
  std::size_t checked = 0, below = 0;
  for (double side : {0.5, 1.0, 3.0})
    for (std::int64_t N : {1, 2, 7, 30, 100, 1000, 5000, 10000}) {
      ++checked;
      below += lt::dirichlet_cube_kinetic_sum(N, side, 1.0) <
               lt::box_kinetic_lower_bound(N, side * side * side, p);
    }
  std::vector<double> Ns, sums;
  for (std::int64_t N : {1000, 1600, 2500, 4000, 6300, 10000}) {
    Ns.push_back(double(N));
    sums.push_back(lt::dirichlet_cube_kinetic_sum(N, 1, 1));
  }
  const double expo = lt::fitted_exponent(Ns, sums);

  std::size_t cases = 0, bad = 0;
  double worst = 0;
  for (double mu : {-1.0, -0.3, 0.5})
    for (double mp : {0.5, 2.0})
      for (double mm : {0.5, 2.0})
        for (double Qp : {1.0, 2.5})
          for (double Qm : {1.0, 2.5}) {
            const lt::SpeciesSpec s{mp, mm, Qp, Qm, mu};
            const auto pp = lt::default_parameters(mp), pm = lt::default_parameters(mm);
            const auto a = lt::stability_constant(s, pp, pm);
            const auto b = lt::stability_constant_coordinate_descent(s, pp, pm);
            ++cases;
            bad += !(std::isfinite(a.min_value) && a.min_value <= 0);
            worst = std::max(worst, std::abs(a.min_value - b.min_value) /
                                        std::max(std::abs(a.min_value), 1e-300));
          }
  (void)seed;
  o.note("box bound violations " + std::to_string(below) + "/" + std::to_string(checked) +
         " exponent=" + fmt("%.4f", expo) + " stability cases=" + std::to_string(cases) +
         " non-finite=" + std::to_string(bad) + " scan vs descent=" + sci(worst));
  o.require(below == 0, "Dirichlet sums above the box bound");
  o.require(std::abs(expo - 5.0 / 3) <= 0.04, "exponent 5/3 +- 0.04");
  o.require(bad == 0, "stability constant finite and bounded");
  o.require(worst < 1e-8, "scan vs coordinate descent 1e-8");
  return o;
}

ops::PeriodicField gaussian_field(std::size_t n, double L, double w) {
  return ops::PeriodicField::sample(n, L, 1, [&](std::size_t, const Vec3 &x) {
    return ops::cplx(std::exp(-x.squaredNorm() / (2 * w * w)), 0);
  });
}

ops::PeriodicField random_envelope(std::size_t n, double L, std::uint64_t seed) {
  auto f = ops::random_band_limited(n, L, 1, 2, seed, false);
  const auto g = gaussian_field(n, L, L / 14);
  for (std::size_t i = 0; i < f.points(); ++i)
    f.data[i] = (1.2 + f.data[i]) * g.data[i];
  return f;
}

Outcome operators(std::uint64_t seed) {
  Outcome o;
  auto sub = [&](std::uint64_t k) { return kernels::mix_seed(seed, 1100 + k); };

  double lich = 0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto psi = ops::random_band_limited(32, 2 * kPi, 2, 5, sub(t), false);
    const auto A = ops::random_band_limited(32, 2 * kPi, 3, 5, sub(10 + t));
    const auto r = ops::lichnerowicz_check(psi, A, 1.7);
    lich = std::max(lich, r.max_residual / r.scale);
  }

  const double L = 16.0;
  const Vec3 B0(0.3, -0.2, 0.5);
  std::vector<double> res, ns;
  for (std::size_t n : {32, 40, 48, 56}) {
    const auto A = ops::PeriodicField::sample(n, L, 3, [&](std::size_t c, const Vec3 &x) {
      const Vec3 a = 0.5 * B0.cross(x) * std::exp(-x.squaredNorm() / (2 * 1.4 * 1.4));
      return ops::cplx(a[int(c)], 0);
    });
    const auto psi = ops::PeriodicField::sample(n, L, 2, [&](std::size_t c, const Vec3 &x) {
      const Vec3 y = x - Vec3(0.4, -0.3, 0.2);
      return std::exp(-y.squaredNorm() / (2 * 0.8 * 0.8)) *
             (c == 0 ? ops::cplx(1, 0.5) : ops::cplx(-0.3, 1));
    });
    const auto r = ops::lichnerowicz_check(psi, A, 1.0);
    res.push_back(r.max_residual / r.scale);
    ns.push_back(double(n));
  }
  const double order = -std::log(res[1] / res[0]) / std::log(ns[1] / ns[0]);

  const double C = ops::sobolev_test_constant();
  int ordered = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto f = random_envelope(32, 10.0, sub(100 + t));
    const auto A = ops::random_band_limited(32, 10.0, 3, 3, sub(300 + t));
    const auto tr = ops::diamagnetic_sobolev_check(f, A, 2.0, C);
    ordered += tr.lhs_ge_mid && tr.mid_ge_sobolev;
  }

  double gauge = 0;
  const double Q = 1.3;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto f = random_envelope(48, 12.0, sub(500 + t));
    const auto A = ops::random_band_limited(48, 12.0, 3, 3, sub(600 + t));
    const auto theta = ops::random_band_limited(48, 12.0, 1, 3, sub(700 + t));
    const auto grad = ops::spectral_gradient(theta);
    auto A2 = A;
    auto f2 = f;
    for (std::size_t i = 0; i < A.data.size(); ++i)
      A2.data[i] += ops::cplx(grad.data[i].real(), 0);
    for (std::size_t i = 0; i < f.points(); ++i)
      f2.data[i] *= std::polar(1.0, -Q * theta.data[i].real());
    const double a = ops::magnetic_kinetic_quadratic_form(f, A, Q, 1.0);
    const double b = ops::magnetic_kinetic_quadratic_form(f2, A2, Q, 1.0);
    gauge = std::max(gauge, std::abs(a - b) / a);
  }
  o.note("lichnerowicz band-limited=" + sci(lich) + " windowed finest=" + sci(res.back()) +
         " order=" + fmt("%.2f", order) + " diamagnetic " + std::to_string(ordered) +
         "/100 gauge=" + sci(gauge));
  o.require(lich < 1e-8 && res.back() < 1e-8, "Lichnerowicz residual < 1e-8");
  o.require(order >= 2, "grid convergence order >= 2");
  o.require(ordered == 100, "diamagnetic ordering 100/100");
  o.require(gauge < 1e-10, "gauge covariance 1e-10");
  return o;
}

Outcome collapse(std::uint64_t) {
  Outcome o;
  double scaling = 0;
  for (const auto &t : {inst::TwoBodyTrialState::separable(0.7), inst::TwoBodyTrialState::correlated(0.9, 1.4),
                        inst::TwoBodyTrialState::correlated(3.0, 0.4)})
    for (double Q : {0.5, 1.7, 3.0})
      for (double ell : {0.01, 0.5, 3.0, 200.0}) {
        const double lhs = ell * inst::relativistic_two_body_energy(t, Q, 1, ell).total();
        const double rhs = inst::relativistic_two_body_energy(t, Q, ell, 1).total();
        scaling = std::max(scaling, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }

  std::vector<inst::TwoBodyTrialState> fam = inst::separable_family({1.0});
  std::vector<std::vector<inst::TwoBodyTrialState>> additions{
      inst::separable_family({0.2, 5.0}), inst::correlated_family({0.5}, {1.0}),
      inst::correlated_family({10.0}, {0.5}), inst::correlated_family({100.0}, {0.5, 1.0}),
      inst::correlated_family({1000.0}, {0.5})};
  double width = 0;
  bool signs = true, monotone = true;
  double prev = 1e300;
  std::string trail;
  for (std::size_t k = 0; k <= additions.size(); ++k) {
    if (k > 0)
      fam.insert(fam.end(), additions[k - 1].begin(), additions[k - 1].end());
    const auto cc = inst::critical_charge_upper_bound(fam);
    width = std::max(width, cc.Q_hi - cc.Q_lo);
    double min_lo = 1e300, min_hi = 1e300;
    for (const auto &t : fam) {
      min_lo = std::min(min_lo, inst::relativistic_two_body_energy(t, cc.Q_lo, 0, 1).total());
      min_hi = std::min(min_hi, inst::relativistic_two_body_energy(t, cc.Q_hi, 0, 1).total());
    }
    signs = signs && min_lo >= -1e-12 && min_hi < 0;
    monotone = monotone && cc.Q_upper <= prev + 1e-6;
    prev = cc.Q_upper;
    trail += (trail.empty() ? "" : ",") + fmt("%.7f", cc.Q_upper);
  }
  o.note("scaling=" + sci(scaling) + " max bracket=" + sci(width) + " Q_upper=[" + trail + "]");
  o.require(scaling < 1e-8, "l-scaling identity 1e-8");
  o.require(width <= 1e-6 && signs, "bisection bracket 1e-6");
  o.require(monotone, "monotone under family enlargement");
  return o;
}

std::vector<Criterion> criteria() {
  return {
      {1, "I0 identity", 1, i0_identity},
      {2, "semiclassical coefficient", 10, semiclassical},
      {3, "Onsager bound sweep", 60, onsager},
      {4, "Newton potential", 1e300, newton},
      {5, "Fock oracle", 60, fock},
      {6, "Bogoliubov dispersion", 1e300, dispersion},
      {7, "Dyson solver", 120, dyson},
      {8, "thermodynamic limit", 300, thermo_limit},
      {9, "Graf-Schenker", 600, graf_schenker},
      {10, "Lieb-Thirring chain", 1e300, lieb_thirring},
      {11, "operator identities", 1e300, operators},
      {12, "relativistic collapse", 1e300, collapse},
  };
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"qcg acceptance runner"};
  int only = 0;
  std::uint64_t seed = kDefaultSeed;
  app.add_option("--only", only, "run a single criterion (1-12)")->check(CLI::Range(1, 12));
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  int failed = 0;
  for (const auto &c : criteria()) {
    if (only && c.id != only)
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run(seed);
    } catch (const std::exception &e) {
      out.pass = false;
      out.note(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.time_limit) {
      out.pass = false;
      out.note("FAILED runtime limit " + fmt("%g", c.time_limit) + " s");
    }
    failed += !out.pass;
    std::printf("[%s] criterion %d (%s): %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
