#include "qcg/bogoliubov.hpp"
#include "qcg/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qcg::bog {

namespace {

double sq(double x) { return x * x; }

using GL10 = boost::math::quadrature::gauss<double, 10>;

// Gauss-Legendre 10 nodes and weights mapped to [a, b].
template <class F> void for_gl10(double a, double b, F &&body) {
  const auto &x = GL10::abscissa();
  const auto &w = GL10::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) {
      body(c, h * w[i]);
      continue;
    }
    body(c - h * x[i], h * w[i]);
    body(c + h * x[i], h * w[i]);
  }
}

// Derivative at x of the cubic through g at four equispaced points of [a, b].
// Exact for the spline, which is a cubic on every node interval.
struct CubicOnInterval {
  double a, h, v[4];
  CubicOnInterval(const RadialGridFunction &g, double lo, double hi) : a(lo), h((hi - lo) / 3) {
    for (int j = 0; j < 4; ++j)
      v[j] = g(j == 3 ? hi : lo + j * h);
  }
  double derivative(double x) const {
    const double t = (x - a) / h;
    // d/dt of the Lagrange basis on t = 0, 1, 2, 3
    const double l0 = -((t - 2) * (t - 3) + (t - 1) * (t - 3) + (t - 1) * (t - 2)) / 6;
    const double l1 = ((t - 2) * (t - 3) + t * (t - 3) + t * (t - 2)) / 2;
    const double l2 = -((t - 1) * (t - 3) + t * (t - 3) + t * (t - 1)) / 2;
    const double l3 = ((t - 1) * (t - 2) + t * (t - 2) + t * (t - 1)) / 6;
    return (l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3]) / h;
  }
};

// Generalised Laguerre L_k^{(alpha)}(x) by the three-term recurrence.
double laguerre(std::size_t k, double alpha, double x) {
  if (k == 0)
    return 1;
  double p0 = 1, p1 = 1 + alpha - x;
  for (std::size_t j = 1; j < k; ++j) {
    const double p2 = ((2 * double(j) + 1 + alpha - x) * p1 - (double(j) + alpha) * p0) / double(j + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

} // namespace

// ---------------------------------------------------------------------------
// Pair-excitation state
// ---------------------------------------------------------------------------

void PairExcitationSpec::validate() const {
  if (n_modes < 1)
    throw DomainError("PairExcitationSpec: need at least one mode");
  if (lambdas.size() != n_modes)
    throw DomainError("PairExcitationSpec: lambdas must have n_modes entries");
  for (double l : lambdas)
    if (!(l >= 0 && l <= kLambdaMax))
      throw DomainError("PairExcitationSpec: lambda " + std::to_string(l) +
                        " outside [0, 1 - 1e-6]");
  if (!(sqrt_N >= 0) || !std::isfinite(sqrt_N))
    throw DomainError("PairExcitationSpec: sqrt_N must be finite and >= 0");
  if (!xi.empty() && xi.size() != n_modes)
    throw DomainError("PairExcitationSpec: xi must have n_modes entries");
  if (sqrt_N > 0) {
    if (xi.empty())
      throw DomainError("PairExcitationSpec: xi required when sqrt_N > 0");
    const double nrm = std::sqrt(std::inner_product(xi.begin(), xi.end(), xi.begin(), 0.0));
    if (std::abs(nrm - 1) > 1e-10)
      throw DomainError("PairExcitationSpec: xi must be a unit vector");
  }
}

Eigen::VectorXd PairExcitationSpec::xi_vector() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(Eigen::Index(n_modes));
  for (std::size_t i = 0; i < xi.size(); ++i)
    v[Eigen::Index(i)] = xi[i];
  return v;
}

PsdMatrix gamma_from_spec(const PairExcitationSpec &s) {
  s.validate();
  Eigen::VectorXd d(Eigen::Index(s.n_modes));
  for (std::size_t i = 0; i < s.n_modes; ++i)
    d[Eigen::Index(i)] = sq(s.lambdas[i]) / (1 - sq(s.lambdas[i]));
  return PsdMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

FockMoments closed_form_moments(const PairExcitationSpec &s) {
  const auto gamma = gamma_from_spec(s);
  const Eigen::MatrixXd &g = gamma.entries();
  const Eigen::MatrixXd S = psd_function(PsdMatrix(Eigen::MatrixXd(g * g + g)),
                                         [](double x) { return std::sqrt(x); });
  const Eigen::VectorXd xi = s.xi_vector();
  const double N = sq(s.sqrt_N);
  const Eigen::MatrixXd cond = N * xi * xi.transpose();

  FockMoments m;
  m.one_pdm = cond + g;
  m.pair = cond - S;
  const Eigen::Index n = g.rows();
  m.four_point.resize(n, n);
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = 0; v < n; ++v)
      m.four_point(u, v) = sq(S(u, v)) + sq(g(u, v)) + g(u, u) * g(v, v);
  m.number_mean = N + g.trace();
  m.number_variance = 2 * (g * g + g).trace() +
                      N * (2 * xi.dot(g * xi) + 1 - 2 * xi.dot(S * xi));
  return m;
}

double FockOracleReport::max_deviation() const {
  double d = 0;
  d = std::max(d, (oracle.one_pdm - closed.one_pdm).cwiseAbs().maxCoeff());
  d = std::max(d, (oracle.pair - closed.pair).cwiseAbs().maxCoeff());
  d = std::max(d, (oracle.four_point - closed.four_point).cwiseAbs().maxCoeff());
  d = std::max(d, std::abs(oracle.number_mean - closed.number_mean));
  d = std::max(d, std::abs(oracle.number_variance - closed.number_variance));
  return d;
}

namespace {

// Occupation amplitudes 0..T of D(alpha) S(lambda) |0> for one mode.
// D|n> = (a* - alpha) D|n-1> / sqrt(n) with D|0> the coherent state; rows <= T
// of D|n> depend only on rows <= T of D|n-1>, so the recurrence is exact.
std::vector<double> displaced_squeezed_mode(double alpha, double lambda, std::size_t T) {
  std::vector<double> col(T + 1), next(T + 1), out(T + 1, 0.0);
  col[0] = std::exp(-alpha * alpha / 2);
  for (std::size_t m = 1; m <= T; ++m)
    col[m] = col[m - 1] * alpha / std::sqrt(double(m));

  double c = std::pow(1 - lambda * lambda, 0.25); // amplitude of |2k>
  const std::size_t cap = 400000;
  for (std::size_t n = 0;; ++n) {
    if (n % 2 == 0) {
      for (std::size_t m = 0; m <= T; ++m)
        out[m] += c * col[m];
      const double k = double(n / 2 + 1);
      c *= -lambda * std::sqrt((2 * k - 1) / (2 * k));
      if (std::abs(c) < 1e-20 || n > cap)
        break;
    }
    const double s = 1 / std::sqrt(double(n + 1));
    for (std::size_t m = 0; m <= T; ++m)
      next[m] = s * ((m > 0 ? std::sqrt(double(m)) * col[m - 1] : 0.0) - alpha * col[m]);
    std::swap(col, next);
  }
  return out;
}

struct FockSpace {
  std::size_t modes, dim1, size;
  std::vector<std::size_t> stride;
  FockSpace(std::size_t n, std::size_t T) : modes(n), dim1(T + 1), size(1), stride(n) {
    for (std::size_t i = n; i-- > 0;) {
      stride[i] = size;
      size *= dim1;
    }
  }
  std::size_t occ(std::size_t idx, std::size_t mode) const { return (idx / stride[mode]) % dim1; }

  std::vector<double> annihilate(const std::vector<double> &v, std::size_t mode) const {
    std::vector<double> w(size, 0.0);
    for (std::size_t idx = 0; idx < size; ++idx) {
      const std::size_t n = occ(idx, mode);
      if (n + 1 < dim1)
        w[idx] = std::sqrt(double(n + 1)) * v[idx + stride[mode]];
    }
    return w;
  }
};

double dot(const std::vector<double> &a, const std::vector<double> &b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::vector<double> axpy(const std::vector<double> &x, double a, const std::vector<double> &y) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    r[i] = x[i] + a * y[i];
  return r;
}

} // namespace

FockOracleReport fock_oracle(const PairExcitationSpec &s, std::size_t truncation,
                             double max_norm_deficit) {
  s.validate();
  if (s.n_modes > 3)
    throw DomainError("fock_oracle: at most 3 modes");
  if (truncation < 2)
    throw DomainError("fock_oracle: truncation must be >= 2");

  const Eigen::VectorXd xi = s.xi_vector();
  const std::size_t n = s.n_modes;
  std::vector<std::vector<double>> factors;
  for (std::size_t i = 0; i < n; ++i)
    factors.push_back(displaced_squeezed_mode(s.sqrt_N * xi[Eigen::Index(i)], s.lambdas[i], truncation));

  const FockSpace fs(n, truncation);
  std::vector<double> psi(fs.size);
  for (std::size_t idx = 0; idx < fs.size; ++idx) {
    double a = 1;
    for (std::size_t i = 0; i < n; ++i)
      a *= factors[i][fs.occ(idx, i)];
    psi[idx] = a;
  }

  FockOracleReport rep;
  rep.truncation = truncation;
  const double norm2 = dot(psi, psi);
  rep.norm_deficit = 1 - norm2;
  if (rep.norm_deficit > max_norm_deficit)
    throw TruncationError("fock_oracle: norm deficit " + std::to_string(rep.norm_deficit) +
                          " at truncation " + std::to_string(truncation));
  for (double &x : psi)
    x /= std::sqrt(norm2);

  std::vector<std::vector<double>> a_psi(n);
  for (std::size_t i = 0; i < n; ++i)
    a_psi[i] = fs.annihilate(psi, i);

  auto &m = rep.oracle;
  const auto N = Eigen::Index(n);
  m.one_pdm.resize(N, N);
  m.pair.resize(N, N);
  m.four_point.resize(N, N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m.one_pdm(Eigen::Index(i), Eigen::Index(j)) = dot(a_psi[i], a_psi[j]);
      // <Psi, a*_i a*_j Psi> = <a_j a_i Psi, Psi>
      m.pair(Eigen::Index(i), Eigen::Index(j)) = dot(fs.annihilate(a_psi[i], j), psi);
    }
  for (std::size_t u = 0; u < n; ++u) {
    const auto bu = axpy(a_psi[u], -s.sqrt_N * xi[Eigen::Index(u)], psi);
    for (std::size_t v = 0; v < n; ++v) {
      const auto bvbu = axpy(fs.annihilate(bu, v), -s.sqrt_N * xi[Eigen::Index(v)], bu);
      m.four_point(Eigen::Index(u), Eigen::Index(v)) = dot(bvbu, bvbu);
    }
  }
  std::vector<double> npsi(fs.size, 0.0);
  for (std::size_t idx = 0; idx < fs.size; ++idx) {
    std::size_t tot = 0;
    for (std::size_t i = 0; i < n; ++i)
      tot += fs.occ(idx, i);
    npsi[idx] = double(tot) * psi[idx];
  }
  m.number_mean = dot(psi, npsi);
  m.number_variance = dot(npsi, npsi) - sq(m.number_mean);

  rep.closed = closed_form_moments(s);
  return rep;
}

// ---------------------------------------------------------------------------
// Condensate, basis, Coulomb kernel
// ---------------------------------------------------------------------------

double radial_norm2(const RadialGridFunction &g) {
  const auto &r = g.nodes();
  double total = 4 * kPi * sq(g.values().front()) * std::pow(r.front(), 3) / 3;
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    for_gl10(r[i], r[i + 1], [&](double x, double w) { total += w * 4 * kPi * x * x * sq(g(x)); });
  if (g.tail())
    total += integrate_to_infinity([&](double x) { return 4 * kPi * x * x * sq(g(x)); }, r.back());
  return total;
}

CondensateProfile::CondensateProfile(RadialGridFunction xi0, double N)
    : xi0_(std::move(xi0)), N_(N) {
  if (!(N > 0) || !std::isfinite(N))
    throw DomainError("CondensateProfile: N must be positive");
  if (xi0_.tail())
    throw DomainError("CondensateProfile: xi0 must vanish beyond its last node");
  for (double v : xi0_.values())
    if (v < 0)
      throw DomainError("CondensateProfile: xi0 must be nonnegative");
  const double nrm = radial_norm2(xi0_);
  if (std::abs(nrm - 1) > 1e-10)
    throw DomainError("CondensateProfile: int xi0^2 = " + std::to_string(nrm) + ", expected 1");
}

CondensateProfile CondensateProfile::from_function(const std::function<double(double)> &f,
                                                   std::vector<double> nodes, double N) {
  auto g = RadialGridFunction::sample(f, nodes);
  const double s = 1 / std::sqrt(radial_norm2(g));
  auto v = g.values();
  for (double &x : v)
    x *= s;
  return CondensateProfile(RadialGridFunction(std::move(nodes), std::move(v)), N);
}

double CondensateProfile::charge_component(double r) const { return std::sqrt(0.5) * xi0_(r); }

double CondensateProfile::gradient_norm2() const {
  const auto &r = xi0_.nodes();
  double total = 0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const CubicOnInterval c(xi0_, r[i], r[i + 1]);
    for_gl10(r[i], r[i + 1],
             [&](double x, double w) { total += w * 4 * kPi * x * x * sq(c.derivative(x)); });
  }
  return total;
}

Eigen::MatrixXd RadialBasis::gram() const {
  const auto n = Eigen::Index(size());
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = k; l < n; ++l)
      G(k, l) = G(l, k) = integrate(
          [&](double r) { return 4 * kPi * r * r * f[std::size_t(k)](r) * f[std::size_t(l)](r); },
          0, r_max, 1e-14);
  return G;
}

Eigen::MatrixXd RadialBasis::laplacian() const {
  if (df.size() != f.size())
    throw BasisError("RadialBasis: derivatives missing");
  const auto n = Eigen::Index(size());
  Eigen::MatrixXd L(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = k; l < n; ++l)
      L(k, l) = L(l, k) = integrate(
          [&](double r) { return 4 * kPi * r * r * df[std::size_t(k)](r) * df[std::size_t(l)](r); },
          0, r_max, 1e-14);
  return L;
}

void RadialBasis::check_orthonormal(double tol) const {
  if (f.empty() || !(r_max > 0))
    throw BasisError("RadialBasis: empty basis or nonpositive r_max");
  const auto G = gram();
  const double dev = (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  if (dev > tol)
    throw BasisError("RadialBasis: Gram deviation " + std::to_string(dev));
}

RadialBasis oscillator_s_basis(std::size_t K, double w, double r_max) {
  if (K < 1 || !(w > 0) || !(r_max > 0))
    throw DomainError("oscillator_s_basis: need K >= 1, w > 0, r_max > 0");
  RadialBasis b;
  b.r_max = r_max;
  for (std::size_t k = 0; k < K; ++k) {
    const double c = std::sqrt(std::exp(std::lgamma(double(k) + 1) - std::lgamma(double(k) + 1.5)) /
                               (2 * kPi * w * w * w));
    b.f.push_back([=](double r) {
      const double x = r * r / (w * w);
      return c * laguerre(k, 0.5, x) * std::exp(-x / 2);
    });
    b.df.push_back([=](double r) {
      const double x = r * r / (w * w);
      const double dl = k == 0 ? 0.0 : -laguerre(k - 1, 1.5, x);
      return c * std::exp(-x / 2) * (2 * r / (w * w)) * (dl - 0.5 * laguerre(k, 0.5, x));
    });
  }
  return b;
}

Eigen::MatrixXd coulomb_kernel_matrix(const CondensateProfile &xi0, const RadialBasis &basis) {
  basis.check_orthonormal();
  const double R = std::min(basis.r_max, xi0.xi0().r_max());
  const std::size_t panels = 400;
  const auto n = basis.size();
  const double h = R / double(panels);

  auto G = [&](std::size_t l, double s) { return xi0.xi0()(s) * basis.f[l](s); };

  // Per-panel integrals of s^2 G and s G.
  std::vector<std::vector<double>> pa(n, std::vector<double>(panels)),
      pb(n, std::vector<double>(panels));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t p = 0; p < panels; ++p) {
      double a = 0, b = 0;
      for_gl10(p * h, (p + 1) * h, [&](double s, double w) {
        const double g = G(l, s);
        a += w * s * s * g;
        b += w * s * g;
      });
      pa[l][p] = a;
      pb[l][p] = b;
    }

  Eigen::MatrixXd Km = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
  for (std::size_t l = 0; l < n; ++l) {
    const double btot = std::accumulate(pb[l].begin(), pb[l].end(), 0.0);
    double acum = 0, bcum = 0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double a0 = p * h;
      for_gl10(a0, a0 + h, [&](double x, double w) {
        // A(x) = int_0^x s^2 G, B(x) = int_x^R s G
        double ap = 0, bp = 0;
        for_gl10(a0, x, [&](double s, double ws) {
          const double g = G(l, s);
          ap += ws * s * s * g;
          bp += ws * s * g;
        });
        const double V = 4 * kPi * ((acum + ap) / x + (btot - bcum - bp));
        const double base = w * 4 * kPi * x * x * xi0.xi0()(x) * V;
        for (std::size_t k = 0; k < n; ++k)
          Km(Eigen::Index(k), Eigen::Index(l)) += base * basis.f[k](x);
      });
      acum += pa[l][p];
      bcum += pb[l][p];
    }
  }
  return 0.5 * (Km + Km.transpose());
}

double coulomb_expectation_finite_basis(const CondensateProfile &xi0, const PsdMatrix &gamma0,
                                        const RadialBasis &basis) {
  if (std::size_t(gamma0.dim()) != basis.size())
    throw DomainError("coulomb_expectation_finite_basis: gamma0 and basis sizes differ");
  const Eigen::MatrixXd Km = coulomb_kernel_matrix(xi0, basis);
  const Eigen::MatrixXd &g = gamma0.entries();
  const Eigen::MatrixXd S = psd_sqrt(PsdMatrix(Eigen::MatrixXd(g * g + g))).entries();
  return xi0.N() * (Km * (g - S)).trace();
}

EnergyReport total_energy_expectation(const CondensateProfile &xi0, const PsdMatrix &gamma0,
                                      const RadialBasis &basis) {
  const double coul = coulomb_expectation_finite_basis(xi0, gamma0, basis);
  const double pair_kin = 0.5 * (basis.laplacian() * gamma0.entries()).trace();
  EnergyReport r;
  r.name = "pair_excitation_energy";
  r.add("condensate_kinetic", 0.5 * xi0.N() * xi0.gradient_norm2())
      .add("pair_kinetic", pair_kin)
      .add("coulomb", coul);
  r.check("pair_kinetic >= 0", pair_kin >= -1e-12 * std::abs(pair_kin))
      .check("coulomb <= 0", coul <= 1e-12 * std::abs(coul));
  r.provenance = {{"N", xi0.N()}, {"basis_size", basis.size()}, {"r_max", basis.r_max}};
  return r;
}

// ---------------------------------------------------------------------------
// Semiclassical minimisation and I0
// ---------------------------------------------------------------------------

DispersionMin bogoliubov_dispersion_min(double tau, double g) {
  if (!(tau >= 0) || !(g >= 0) || !std::isfinite(tau) || !std::isfinite(g))
    throw DomainError("bogoliubov_dispersion_min: need finite tau, g >= 0");
  if (g == 0)
    return {0, 0};
  if (tau == 0)
    return {std::numeric_limits<double>::infinity(), -g / 2};
  const double s = std::sqrt(tau * tau + 2 * tau * g);
  const double q = g / (tau + g + s); // in (0, 1]
  return {q * g / (2 * s), -0.5 * g * q};
}

I0Values compute_I0() {
  // 1 + x^4 - x^2 sqrt(x^4 + 2) = 1 / (1 + x^4 + x^2 sqrt(x^4 + 2))
  const double X = 20;
  const double body = integrate(
      [](double x) { return 1 / (1 + x * x * x * x + x * x * std::sqrt(x * x * x * x + 2)); }, 0, X,
      1e-15);
  const double tail = 1 / (6 * std::pow(X, 3)) - 1 / (14 * std::pow(X, 7)) + 5 / (88 * std::pow(X, 11));
  I0Values v;
  v.quadrature = std::pow(2 / kPi, 0.75) * (body + tail);
  v.closed_form = std::pow(4.0, 1.25) * gamma_fn(0.75) / (5 * std::pow(kPi, 0.25) * gamma_fn(1.25));
  return v;
}

double semiclassical_p_integral(double density, double N) {
  if (!(density >= 0) || !(N > 0) || !std::isfinite(density) || !std::isfinite(N))
    throw DomainError("semiclassical_p_integral: need density >= 0 and N > 0");
  if (density == 0)
    return 0;
  const double n = N * density;
  const double val = integrate_to_infinity(
      [&](double p) {
        const double g = 4 * kPi * n / (p * p);
        if (!std::isfinite(g))
          return -2 * kPi * n;
        if (!std::isfinite(p * p))
          return 0.0;
        return p * p * bogoliubov_dispersion_min(p * p / 2, g).e_min;
      },
      0.0, 1e-13);
  if (!std::isfinite(val))
    throw TailError("semiclassical_p_integral: non-finite p integral");
  return 4 * kPi * val / std::pow(2 * kPi, 3);
}

// ---------------------------------------------------------------------------
// Dyson variational problem
// ---------------------------------------------------------------------------

DiscreteTerms dyson_discrete_terms(const DysonGrid &g, const std::vector<double> &u) {
  if (u.size() != g.n)
    throw DomainError("dyson_discrete_terms: size mismatch");
  const double h = g.spacing();
  double k = 0, p = 0, nrm = 0, prev = 0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double r = double(i + 1) * h;
    k += sq(u[i] - prev);
    prev = u[i];
    const double v = std::max(u[i], 0.0);
    p += v * v * std::sqrt(v / r);
    nrm += u[i] * u[i];
  }
  k += prev * prev;
  return {4 * kPi * k / h, 4 * kPi * h * p, 4 * kPi * h * nrm};
}

DysonTerms dyson_terms(const std::function<double(double)> &phi,
                       const std::function<double(double)> &dphi, double r_max) {
  const double K = integrate([&](double r) { return 4 * kPi * r * r * sq(dphi(r)); }, 0, r_max, 1e-13);
  const double P = integrate(
      [&](double r) {
        const double v = std::max(phi(r), 0.0);
        return 4 * kPi * r * r * v * v * std::sqrt(v);
      },
      0, r_max, 1e-13);
  return {K, P};
}

RadialGridFunction VariationalState::phi() const {
  const double h = grid.spacing();
  std::vector<double> r(grid.n + 2), v(grid.n + 2);
  for (std::size_t i = 0; i < grid.n; ++i) {
    r[i + 1] = double(i + 1) * h;
    v[i + 1] = u[i] / r[i + 1];
  }
  r[0] = 0;
  v[0] = std::max(0.0, (4 * v[1] - v[2]) / 3);
  r[grid.n + 1] = grid.r_max;
  v[grid.n + 1] = 0;
  return RadialGridFunction(std::move(r), std::move(v));
}

double VariationalState::rms_radius() const {
  const double h = grid.spacing();
  double m = 0;
  for (std::size_t i = 0; i < grid.n; ++i)
    m += sq(double(i + 1) * h * u[i]);
  return std::sqrt(4 * kPi * h * m);
}

namespace {

// (I + tau A) x = b with A = -D^2 (Dirichlet), Thomas algorithm.
void solve_shifted_laplacian(double tau, double h, const std::vector<double> &b,
                             std::vector<double> &x) {
  const std::size_t n = b.size();
  const double off = -tau / (h * h), diag = 1 + 2 * tau / (h * h);
  std::vector<double> c(n);
  x.resize(n);
  double denom = diag;
  c[0] = off / denom;
  x[0] = b[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag - off * c[i - 1];
    c[i] = off / denom;
    x[i] = (b[i] - off * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;)
    x[i] -= c[i] * x[i + 1];
}

} // namespace

VariationalState dyson_variational_solve(const DysonGrid &grid, double I0,
                                         const std::function<double(double)> &init,
                                         const DysonOptions &opt) {
  if (grid.n < 16 || !(grid.r_max > 0))
    throw DomainError("dyson_variational_solve: need n >= 16 and r_max > 0");
  if (!(I0 > 0))
    throw DomainError("dyson_variational_solve: I0 must be positive");
  const double h = grid.spacing();
  const std::size_t n = grid.n;
  std::vector<double> r(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = double(i + 1) * h;
    const double v = init(r[i]);
    if (!(v >= 0) || !std::isfinite(v))
      throw DomainError("dyson_variational_solve: initial profile must be finite and >= 0");
    u[i] = r[i] * v;
  }
  auto normalise = [&](std::vector<double> &w) {
    const double s = std::sqrt(dyson_discrete_terms(grid, w).norm2);
    if (!(s > 0))
      throw DomainError("dyson_variational_solve: profile vanishes on the grid");
    for (double &x : w)
      x /= s;
  };
  normalise(u);

  auto energy_of = [&](const std::vector<double> &w) {
    const auto t = dyson_discrete_terms(grid, w);
    return 0.5 * t.K - I0 * t.P;
  };
  std::vector<double> grad(n);
  auto residual = [&](const std::vector<double> &w, double &mu) {
    // L^2 gradient of K/2 - I0 P is -u'' - (5/2) I0 r^{-1/2} u^{3/2}
    for (std::size_t i = 0; i < n; ++i) {
      const double lap = (2 * w[i] - (i > 0 ? w[i - 1] : 0.0) - (i + 1 < n ? w[i + 1] : 0.0)) / (h * h);
      const double v = std::max(w[i], 0.0);
      grad[i] = lap - 2.5 * I0 * v * std::sqrt(v / r[i]);
    }
    double gu = 0, uu = 0;
    for (std::size_t i = 0; i < n; ++i) {
      gu += grad[i] * w[i];
      uu += w[i] * w[i];
    }
    mu = gu / uu;
    double res = 0;
    for (std::size_t i = 0; i < n; ++i)
      res += sq(grad[i] - mu * w[i]);
    return std::sqrt(4 * kPi * h * res);
  };

  VariationalState st;
  st.grid = grid;
  st.I0 = I0;
  double E = energy_of(u), theta = opt.step, mu = 0;
  double res = residual(u, mu);
  std::vector<double> rhs(n), pre(n), trial(n);
  std::size_t it = 0;
  for (; it < opt.max_iter && res > opt.tol; ++it) {
    // Preconditioned step u - theta (A + c)^{-1} (grad - mu u), c > 0.
    const double c = std::max(-mu, 1e-4);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::max(u[i], 0.0);
      rhs[i] = (2.5 * I0 * v * std::sqrt(v / r[i]) + (mu + c) * u[i]) / c;
    }
    solve_shifted_laplacian(1 / c, h, rhs, pre);
    for (;;) {
      for (std::size_t i = 0; i < n; ++i)
        trial[i] = std::max((1 - theta) * u[i] + theta * pre[i], 0.0);
      normalise(trial);
      const double Et = energy_of(trial);
      if (Et <= E + 1e-15 * std::abs(E)) {
        u.swap(trial);
        E = Et;
        theta = std::min(theta * 1.25, opt.step);
        break;
      }
      theta *= 0.5;
      if (theta < 1e-12)
        throw ConvergenceError("dyson_variational_solve: step size underflow", res);
    }
    st.energy_trace.push_back(E);
    res = residual(u, mu);
  }
  if (res > opt.tol)
    throw ConvergenceError("dyson_variational_solve: no convergence in " +
                               std::to_string(opt.max_iter) + " iterations",
                           res);

  const auto t = dyson_discrete_terms(grid, u);
  st.u = std::move(u);
  st.K = t.K;
  st.P = t.P;
  st.energy = 0.5 * t.K - I0 * t.P;
  st.multiplier = mu;
  st.gradient_residual = res;
  st.iterations = it;
  st.virial_residual = std::abs(t.K - 0.75 * I0 * t.P) / t.K;
  if (!(st.energy < 0))
    throw ConvergenceError("dyson_variational_solve: minimum is not negative", st.energy);
  if (st.virial_residual > opt.virial_tol)
    throw ConvergenceError("dyson_variational_solve: virial residual above tolerance",
                           st.virial_residual);
  return st;
}

DysonPipelineReport dyson_pipeline(const std::vector<double> &N_list, const VariationalState &s) {
  if (N_list.empty())
    throw DomainError("dyson_pipeline: empty N list");
  DysonPipelineReport rep;
  rep.state = s;
  for (double N : N_list) {
    if (!(N > 0) || !std::isfinite(N))
      throw DomainError("dyson_pipeline: N must be positive");
    const double scale = std::pow(N, 0.2);
    DysonGrid g{s.grid.r_max / scale, s.grid.n};
    // u_xi(r) = r xi0(r) = N^{3/10} r Phi(N^{1/5} r)
    std::vector<double> uxi(s.u.size());
    const double amp = std::pow(N, 0.3) / scale;
    for (std::size_t i = 0; i < uxi.size(); ++i)
      uxi[i] = amp * s.u[i];
    const auto t = dyson_discrete_terms(g, uxi);
    DysonPipelineRow row;
    row.N = N;
    double m = 0;
    const double h = g.spacing();
    for (std::size_t i = 0; i < uxi.size(); ++i)
      m += sq(double(i + 1) * h * uxi[i]);
    row.length_scale = std::sqrt(4 * kPi * h * m / t.norm2);
    row.condensate_kinetic = 0.5 * N * t.K;
    row.potential = -s.I0 * std::pow(N, 1.25) * t.P;
    row.energy = row.condensate_kinetic + row.potential;
    row.ratio = row.energy / std::pow(N, 1.4);
    rep.max_ratio_spread = std::max(rep.max_ratio_spread, std::abs(row.ratio - s.energy) / std::abs(s.energy));
    rep.rows.push_back(row);
  }
  return rep;
}

} // namespace qcg::bog
