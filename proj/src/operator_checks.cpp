#include "qcg/operator_checks.hpp"
#include "qcg/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>

namespace qcg::ops {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex &plan_mutex() {
  static std::mutex m;
  return m;
}

void fft3(std::vector<cplx> &a, std::size_t n, int sign) {
  auto *p = reinterpret_cast<fftw_complex *>(a.data());
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex());
    plan = fftw_plan_dft_3d(int(n), int(n), int(n), p, p, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(plan_mutex());
  fftw_destroy_plan(plan);
}

// Signed integer wave number of FFT index i; Nyquist reported as n / 2.
long wave_index(std::size_t i, std::size_t n) {
  return i <= n / 2 ? long(i) : long(i) - long(n);
}

std::vector<cplx> copy_component(const PeriodicField &f, std::size_t c) {
  return {f.component(c), f.component(c) + f.points()};
}

void check_grids(const PeriodicField &a, const PeriodicField &b, const char *what) {
  if (!a.same_grid(b))
    throw ShapeError(std::string(what) + ": fields live on different grids");
}

void require_components(const PeriodicField &f, std::size_t c, const char *what) {
  f.validate();
  if (f.components != c)
    throw ShapeError(std::string(what) + ": expected " + std::to_string(c) + " components, got " +
                     std::to_string(f.components));
}

void require_real(const PeriodicField &A, const char *what) {
  if (A.max_imag_ratio() > 1e-12)
    throw DomainError(std::string(what) + ": vector potential must be real");
}

// (-i d_j + Q A_j) phi
std::vector<cplx> apply_pi(const std::vector<cplx> &phi, const PeriodicField &A, double Q,
                           std::size_t n, double len, int axis) {
  PeriodicField tmp(n, len, 1);
  tmp.data = phi;
  auto d = spectral_derivative(tmp, 0, axis);
  const cplx *a = A.component(std::size_t(axis));
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = cplx(0, -1) * d[i] + Q * a[i].real() * phi[i];
  return d;
}

double grid_sum_abs2(const std::vector<cplx> &v) {
  double s = 0;
  for (const auto &z : v)
    s += std::norm(z);
  return s;
}

} // namespace

PeriodicField::PeriodicField(std::size_t n, double len, std::size_t comps)
    : grid_n(n), box_len(len), components(comps), data(comps * n * n * n) {
  validate();
}

PeriodicField PeriodicField::sample(std::size_t n, double len, std::size_t comps,
                                    const std::function<cplx(std::size_t, const Vec3 &)> &f) {
  PeriodicField out(n, len, comps);
  for (std::size_t c = 0; c < comps; ++c)
    for (std::size_t i = 0; i < out.points(); ++i)
      out.component(c)[i] = f(c, out.position(i));
  return out;
}

double PeriodicField::cell_volume() const {
  const double h = spacing();
  return h * h * h;
}

Vec3 PeriodicField::position(std::size_t idx) const {
  const std::size_t n = grid_n;
  const double h = spacing(), o = -box_len / 2;
  return Vec3(o + h * double(idx / (n * n)), o + h * double((idx / n) % n), o + h * double(idx % n));
}

void PeriodicField::validate() const {
  if (grid_n < 16 || grid_n % 2 != 0)
    throw ShapeError("PeriodicField: grid_n must be even and >= 16");
  if (!(box_len > 0) || !std::isfinite(box_len))
    throw ShapeError("PeriodicField: box_len must be positive");
  if (components != 1 && components != 2 && components != 3)
    throw ShapeError("PeriodicField: components must be 1, 2 or 3");
  if (data.size() != components * points())
    throw ShapeError("PeriodicField: data size does not match the header");
}

bool PeriodicField::same_grid(const PeriodicField &o) const {
  return grid_n == o.grid_n && box_len == o.box_len;
}

double PeriodicField::max_imag_ratio() const {
  double im = 0, mx = 0;
  for (const auto &z : data) {
    im = std::max(im, std::abs(z.imag()));
    mx = std::max(mx, std::abs(z));
  }
  return mx > 0 ? im / mx : 0.0;
}

namespace {

template <class T> T to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T> void put(std::ostream &os, T v) {
  v = to_le(v);
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <class T> T get(std::istream &is) {
  T v;
  if (!is.read(reinterpret_cast<char *>(&v), sizeof(T)))
    throw ShapeError("PeriodicField::read: truncated file");
  return to_le(v);
}

} // namespace

void PeriodicField::write(const std::filesystem::path &p) const {
  validate();
  std::ofstream os(p, std::ios::binary);
  if (!os)
    throw DomainError("PeriodicField::write: cannot open " + p.string());
  put<std::uint64_t>(os, grid_n);
  put<double>(os, box_len);
  put<std::uint64_t>(os, components);
  for (const auto &z : data) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
  if (!os)
    throw DomainError("PeriodicField::write: write failed for " + p.string());
}

PeriodicField PeriodicField::read(const std::filesystem::path &p) {
  std::ifstream is(p, std::ios::binary);
  if (!is)
    throw DomainError("PeriodicField::read: cannot open " + p.string());
  const auto n = get<std::uint64_t>(is);
  const auto len = get<double>(is);
  const auto comps = get<std::uint64_t>(is);
  if (n > 1024)
    throw ShapeError("PeriodicField::read: grid_n too large");
  PeriodicField f(n, len, comps);
  for (auto &z : f.data) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    z = cplx(re, im);
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw ShapeError("PeriodicField::read: trailing bytes");
  return f;
}

// ---------------------------------------------------------------------------

std::vector<cplx> spectral_derivative(const PeriodicField &f, std::size_t comp, int axis) {
  f.validate();
  if (comp >= f.components || axis < 0 || axis > 2)
    throw ShapeError("spectral_derivative: bad component or axis");
  const std::size_t n = f.grid_n;
  auto a = copy_component(f, comp);
  fft3(a, n, FFTW_FORWARD);
  const double k0 = 2 * kPi / f.box_len;
  const double norm = 1.0 / double(f.points());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t idx[3] = {i, j, k};
        const std::size_t q = idx[axis];
        const double kk = (q == n / 2) ? 0.0 : k0 * double(wave_index(q, n));
        auto &z = a[(i * n + j) * n + k];
        z *= cplx(0, kk) * norm;
      }
  fft3(a, n, FFTW_BACKWARD);
  return a;
}

PeriodicField spectral_gradient(const PeriodicField &theta) {
  require_components(theta, 1, "spectral_gradient");
  PeriodicField g(theta.grid_n, theta.box_len, 3);
  for (int ax = 0; ax < 3; ++ax) {
    const auto d = spectral_derivative(theta, 0, ax);
    std::copy(d.begin(), d.end(), g.component(std::size_t(ax)));
  }
  return g;
}

PeriodicField spectral_curl(const PeriodicField &A) {
  require_components(A, 3, "spectral_curl");
  PeriodicField B(A.grid_n, A.box_len, 3);
  for (int l = 0; l < 3; ++l) {
    const int j = (l + 1) % 3, k = (l + 2) % 3;
    const auto dj_Ak = spectral_derivative(A, std::size_t(k), j);
    const auto dk_Aj = spectral_derivative(A, std::size_t(j), k);
    for (std::size_t i = 0; i < A.points(); ++i)
      B.component(std::size_t(l))[i] = dj_Ak[i] - dk_Aj[i];
  }
  return B;
}

PeriodicField random_band_limited(std::size_t n, double len, std::size_t comps, int kmax,
                                  std::uint64_t seed, bool real) {
  PeriodicField f(n, len, comps);
  if (kmax < 1 || 2 * std::size_t(kmax) >= n)
    throw ResolutionError("random_band_limited: need 1 <= kmax < grid_n / 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (std::size_t c = 0; c < comps; ++c) {
    std::vector<cplx> a(f.points(), cplx(0, 0));
    for (long i = -kmax; i <= kmax; ++i)
      for (long j = -kmax; j <= kmax; ++j)
        for (long k = -kmax; k <= kmax; ++k) {
          const double damp = std::exp(-double(i * i + j * j + k * k) / double(kmax * kmax));
          const cplx z(g(rng), g(rng));
          auto wrap = [n](long v) { return std::size_t(v < 0 ? v + long(n) : v); };
          a[(wrap(i) * n + wrap(j)) * n + wrap(k)] = damp * z;
        }
    fft3(a, n, FFTW_BACKWARD);
    double mx = 0;
    for (auto &z : a) {
      if (real)
        z = cplx(z.real(), 0);
      mx = std::max(mx, std::abs(z));
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      f.component(c)[i] = a[i] / mx;
  }
  return f;
}

double top_third_energy_fraction(const PeriodicField &f) {
  f.validate();
  const std::size_t n = f.grid_n;
  double top = 0, total = 0;
  for (std::size_t c = 0; c < f.components; ++c) {
    auto a = copy_component(f, c);
    fft3(a, n, FFTW_FORWARD);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const double e = std::norm(a[(i * n + j) * n + k]);
          const long m = std::max({std::labs(wave_index(i, n)), std::labs(wave_index(j, n)),
                                   std::labs(wave_index(k, n))});
          total += e;
          if (3 * m > long(n))
            top += e;
        }
  }
  return total > 0 ? top / total : 0.0;
}

// ---------------------------------------------------------------------------

double magnetic_kinetic_quadratic_form(const PeriodicField &f, const PeriodicField &A, double Q,
                                       double m) {
  require_components(f, 1, "magnetic_kinetic_quadratic_form");
  require_components(A, 3, "magnetic_kinetic_quadratic_form");
  check_grids(f, A, "magnetic_kinetic_quadratic_form");
  require_real(A, "magnetic_kinetic_quadratic_form");
  if (!(m > 0))
    throw DomainError("magnetic_kinetic_quadratic_form: mass must be positive");
  const auto phi = copy_component(f, 0);
  double s = 0;
  for (int ax = 0; ax < 3; ++ax)
    s += grid_sum_abs2(apply_pi(phi, A, Q, f.grid_n, f.box_len, ax));
  return s * f.cell_volume() / (2 * m);
}

double sobolev_test_constant() {
  // s = r^2 / (1 + r^2), u = 1 / (1 + r^2), written to stay finite at r = inf.
  auto s = [](double r) { return 1 / (1 + 1 / (r * r)); };
  auto u = [](double r) { return 1 / (1 + r * r); };
  const double mid =
      integrate_to_infinity([&](double r) { return 4 * kPi * s(r) * s(r) * u(r); }, 0.0, 1e-14);
  const double l6 =
      integrate_to_infinity([&](double r) { return 4 * kPi * s(r) * u(r) * u(r); }, 0.0, 1e-14);
  return mid / std::cbrt(l6);
}

double aubin_talenti_ratio(double R) {
  if (!(R > 0))
    throw DomainError("aubin_talenti_ratio: R must be positive");
  const double mid =
      integrate([](double r) { return 4 * kPi * r * r * r * r / std::pow(1 + r * r, 3); }, 0, R);
  const double l6 = integrate([](double r) { return 4 * kPi * r * r / std::pow(1 + r * r, 3); }, 0, R);
  return mid / std::cbrt(l6);
}

DiamagneticTriple diamagnetic_triple_unchecked(const PeriodicField &f, const PeriodicField &A,
                                               double Q, double C_test) {
  require_components(f, 1, "diamagnetic_sobolev_check");
  require_components(A, 3, "diamagnetic_sobolev_check");
  check_grids(f, A, "diamagnetic_sobolev_check");
  require_real(A, "diamagnetic_sobolev_check");
  const std::size_t n = f.grid_n;
  const auto phi = copy_component(f, 0);
  double fmax = 0;
  for (const auto &z : phi)
    fmax = std::max(fmax, std::abs(z));
  const double eps = 1e-10 * fmax;

  DiamagneticTriple t{};
  std::vector<double> grad_abs2(phi.size(), 0.0);
  double lhs = 0;
  for (int ax = 0; ax < 3; ++ax) {
    const auto d = spectral_derivative(f, 0, ax);
    const auto p = apply_pi(phi, A, Q, n, f.box_len, ax);
    lhs += grid_sum_abs2(p);
    // d|f| = Re(conj(f) df) / |f|_eps
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const double den = std::sqrt(std::norm(phi[i]) + eps * eps);
      const double g = den > 0 ? (std::conj(phi[i]) * d[i]).real() / den : 0.0;
      grad_abs2[i] += g * g;
    }
  }
  double mid = 0, six = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    mid += grad_abs2[i];
    six += std::pow(std::norm(phi[i]), 3);
  }
  const double dv = f.cell_volume();
  t.lhs = lhs * dv;
  t.mid = mid * dv;
  t.sobolev_term = std::cbrt(six * dv);
  t.lhs_ge_mid = t.lhs >= t.mid * (1 - 1e-12);
  t.mid_ge_sobolev = t.mid >= C_test * t.sobolev_term;
  return t;
}

DiamagneticTriple diamagnetic_sobolev_check(const PeriodicField &f, const PeriodicField &A,
                                            double Q, double C_test) {
  require_components(f, 1, "diamagnetic_sobolev_check");
  const std::size_t n = f.grid_n;
  double fmax = 0, edge = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double v = std::abs(f.data[(i * n + j) * n + k]);
        fmax = std::max(fmax, v);
        if (i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1)
          edge = std::max(edge, v);
      }
  if (edge > 1e-8 * fmax)
    throw SupportError("diamagnetic_sobolev_check: field is not concentrated inside the box (edge/max = " +
                       std::to_string(edge / fmax) + ")");
  return diamagnetic_triple_unchecked(f, A, Q, C_test);
}

CoulombSplit coulomb_split(double a) {
  if (!(a > 0))
    throw DomainError("coulomb_split: cutoff must be positive");
  return {8 * kPi * std::sqrt(a), 1 / a};
}

double schroedinger_constant(double S) {
  if (!(S > 0))
    throw DomainError("schroedinger_constant: Sobolev constant must be positive");
  const double c1 = 0.4 * std::pow(0.6, 1.5) * std::pow(S, -1.5);
  return std::max(1.0, c1);
}

SchroedingerBound schroedinger_lower_bound_eval(const PeriodicField &f, const PeriodicField &A,
                                                const PeriodicField &V, double integral_V1_52,
                                                double sup_V2, double C) {
  require_components(V, 1, "schroedinger_lower_bound_eval");
  check_grids(f, V, "schroedinger_lower_bound_eval");
  if (!(integral_V1_52 >= 0) || !(sup_V2 >= 0) || !(C > 0))
    throw DomainError("schroedinger_lower_bound_eval: norms must be nonnegative and C positive");
  const double kinetic = 2 * magnetic_kinetic_quadratic_form(f, A, 1.0, 1.0);
  double pot = 0, norm2 = 0;
  for (std::size_t i = 0; i < f.points(); ++i) {
    pot += V.data[i].real() * std::norm(f.data[i]);
    norm2 += std::norm(f.data[i]);
  }
  const double dv = f.cell_volume();
  SchroedingerBound r;
  r.quad_form = kinetic - pot * dv;
  r.bound = -C * (integral_V1_52 + sup_V2) * norm2 * dv;
  r.holds = r.quad_form >= r.bound;
  return r;
}

SchroedingerBound schroedinger_lower_bound_eval(const PeriodicField &f, const PeriodicField &A,
                                                const PeriodicField &V1, const PeriodicField &V2,
                                                double C) {
  require_components(V1, 1, "schroedinger_lower_bound_eval");
  require_components(V2, 1, "schroedinger_lower_bound_eval");
  check_grids(V1, V2, "schroedinger_lower_bound_eval");
  PeriodicField V(V1.grid_n, V1.box_len, 1);
  double i52 = 0, sup = 0;
  for (std::size_t i = 0; i < V.points(); ++i) {
    const double v1 = V1.data[i].real(), v2 = V2.data[i].real();
    if (v1 < 0 || v2 < 0)
      throw DomainError("schroedinger_lower_bound_eval: potentials must be nonnegative");
    i52 += std::pow(v1, 2.5);
    sup = std::max(sup, v2);
    V.data[i] = v1 + v2;
  }
  return schroedinger_lower_bound_eval(f, A, V, i52 * V.cell_volume(), sup, C);
}

LichnerowiczResult lichnerowicz_check(const PeriodicField &psi, const PeriodicField &A, double Q) {
  require_components(psi, 2, "lichnerowicz_check");
  require_components(A, 3, "lichnerowicz_check");
  check_grids(psi, A, "lichnerowicz_check");
  require_real(A, "lichnerowicz_check");
  const double top = top_third_energy_fraction(A);
  if (top >= 1e-10)
    throw ResolutionError("lichnerowicz_check: vector potential not resolved (top-third energy " +
                          std::to_string(top) + ")");
  const std::size_t n = psi.grid_n, np = psi.points();
  const double len = psi.box_len;
  const cplx I(0, 1);

  // sigma . Pi acting on a spinor (u0, u1)
  auto sigma_pi = [&](const std::vector<cplx> &u0, const std::vector<cplx> &u1) {
    const auto x0 = apply_pi(u0, A, Q, n, len, 0), x1 = apply_pi(u1, A, Q, n, len, 0);
    const auto y0 = apply_pi(u0, A, Q, n, len, 1), y1 = apply_pi(u1, A, Q, n, len, 1);
    const auto z0 = apply_pi(u0, A, Q, n, len, 2), z1 = apply_pi(u1, A, Q, n, len, 2);
    std::vector<cplx> r0(np), r1(np);
    for (std::size_t i = 0; i < np; ++i) {
      r0[i] = x1[i] - I * y1[i] + z0[i];
      r1[i] = x0[i] + I * y0[i] - z1[i];
    }
    return std::pair{r0, r1};
  };
  const auto p0 = copy_component(psi, 0), p1 = copy_component(psi, 1);
  const auto [c0, c1] = sigma_pi(p0, p1);
  const auto [l0, l1] = sigma_pi(c0, c1);

  std::vector<cplx> r0(np, 0.0), r1(np, 0.0);
  for (int ax = 0; ax < 3; ++ax) {
    const auto a0 = apply_pi(apply_pi(p0, A, Q, n, len, ax), A, Q, n, len, ax);
    const auto a1 = apply_pi(apply_pi(p1, A, Q, n, len, ax), A, Q, n, len, ax);
    for (std::size_t i = 0; i < np; ++i) {
      r0[i] += a0[i];
      r1[i] += a1[i];
    }
  }
  const auto B = spectral_curl(A);
  const cplx *bx = B.component(0), *by = B.component(1), *bz = B.component(2);
  LichnerowiczResult res{0, 0};
  for (std::size_t i = 0; i < np; ++i) {
    const double Bx = bx[i].real(), By = by[i].real(), Bz = bz[i].real();
    r0[i] += Q * (Bx * p1[i] - I * By * p1[i] + Bz * p0[i]);
    r1[i] += Q * (Bx * p0[i] + I * By * p0[i] - Bz * p1[i]);
    const double d = std::sqrt(std::norm(l0[i] - r0[i]) + std::norm(l1[i] - r1[i]));
    res.max_residual = std::max(res.max_residual, d);
    res.scale = std::max(res.scale, std::sqrt(std::norm(l0[i]) + std::norm(l1[i])));
  }
  return res;
}

} // namespace qcg::ops
