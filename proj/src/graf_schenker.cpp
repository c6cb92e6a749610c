#include "qcg/graf_schenker.hpp"
#include "qcg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcg::gs {

Simplex::Simplex(std::array<Vec3, 4> vertices) : v_(vertices) {
  Mat3 E;
  E.col(0) = v_[1] - v_[0];
  E.col(1) = v_[2] - v_[0];
  E.col(2) = v_[3] - v_[0];
  volume_ = std::abs(E.determinant()) / 6.0;
  const double scale = std::max({E.col(0).norm(), E.col(1).norm(), E.col(2).norm()});
  if (!(volume_ > 1e-12 * scale * scale * scale))
    throw DegenerateError("Simplex: vertices are (nearly) coplanar");
  to_bary_ = E.inverse();
}

Simplex Simplex::regular() {
  // Alternate cube corners (+-1,+-1,+-1) have edge 2 sqrt 2.
  const double s = 1.0 / (2.0 * std::sqrt(2.0));
  return Simplex({Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)});
}

double Simplex::diameter() const {
  double d = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      d = std::max(d, (v_[i] - v_[j]).norm());
  return d;
}

Vec3 Simplex::centroid() const { return 0.25 * (v_[0] + v_[1] + v_[2] + v_[3]); }

double Simplex::circumradius() const {
  const Vec3 c = centroid();
  double r = 0;
  for (const auto &v : v_)
    r = std::max(r, (v - c).norm());
  return r;
}

bool Simplex::contains(const Vec3 &p, double slack) const {
  const Vec3 l = to_bary_ * (p - v_[0]);
  return l.x() >= -slack && l.y() >= -slack && l.z() >= -slack && l.sum() <= 1.0 + slack;
}

Simplex Simplex::centered() const {
  const Vec3 c = centroid();
  return Simplex({v_[0] - c, v_[1] - c, v_[2] - c, v_[3] - c});
}

double Box::volume() const {
  const Vec3 d = hi - lo;
  return std::max(0.0, d.x()) * std::max(0.0, d.y()) * std::max(0.0, d.z());
}

// ---------------------------------------------------------------------------

Mat3 haar_rotation(std::mt19937_64 &rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q;
  double norm = 0;
  do {
    q = Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng));
    norm = q.norm();
  } while (norm < 1e-12);
  q.coeffs() /= norm;
  return q.toRotationMatrix();
}

IsometrySample sample_isometry(std::mt19937_64 &rng, const Box &cell) {
  if (!(cell.volume() > 0))
    throw DomainError("sample_isometry: translation cell must have positive volume");
  IsometrySample g;
  g.rotation = haar_rotation(rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 3; ++i)
    g.translation[i] = cell.lo[i] + (cell.hi[i] - cell.lo[i]) * u(rng);
  return g;
}

double rotation_angle(const Mat3 &R) {
  const double c = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
  return std::acos(c);
}

Box translation_cell(const std::vector<Vec3> &points, const Simplex &simplex, double ell) {
  if (points.empty())
    throw DomainError("translation_cell: need at least one point");
  Vec3 lo = points.front(), hi = points.front();
  for (const auto &p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double pad = ell * simplex.circumradius();
  return {lo.array() - pad, hi.array() + pad};
}

// ---------------------------------------------------------------------------

namespace {

void check_ell(double ell) {
  if (!(ell > 0) || !std::isfinite(ell))
    throw DomainError("ell must be positive");
}

// Reference simplex centred at the origin and scaled by ell; a point y lies in
// g(ell S) iff g^{-1}(y) lies in it.
struct PlacedSimplex {
  Simplex s;
  PlacedSimplex(const Simplex &base, double ell)
      : s([&] {
          const auto c = base.centered();
          auto v = c.vertices();
          for (auto &x : v)
            x *= ell;
          return Simplex(v);
        }()) {}
};

} // namespace

KernelEstimate overlap_kernel(const Vec3 &r, const Vec3 &r_prime, const Simplex &simplex,
                              double ell, std::uint64_t samples, std::uint64_t seed,
                              kernels::Exec exec) {
  check_ell(ell);
  if (samples < 1000)
    throw DomainError("overlap_kernel: need at least 1000 samples");
  const PlacedSimplex placed(simplex, ell);
  const Box cell = translation_cell({r, r_prime}, simplex, ell);
  const double weight = cell.volume() / placed.s.volume();
  const auto m = kernels::sharded_monte_carlo(
      samples, seed, 1,
      [&](std::mt19937_64 &rng, std::uint64_t n, std::span<kernels::Moments> out) {
        for (std::uint64_t i = 0; i < n; ++i) {
          const auto g = sample_isometry(rng, cell);
          const bool both = placed.s.contains(g.inverse_apply(r)) &&
                            placed.s.contains(g.inverse_apply(r_prime));
          out[0].push(both ? weight : 0.0);
        }
      },
      exec);
  return {m[0].mean(), m[0].std_error()};
}

RadialKernelProfile radial_overlap_profile(const Simplex &simplex, double ell,
                                           std::size_t nodes, std::uint64_t samples,
                                           std::uint64_t seed, kernels::Exec exec) {
  check_ell(ell);
  if (nodes < 3)
    throw DomainError("radial_overlap_profile: need at least 3 nodes");
  RadialKernelProfile p;
  p.x = uniform_grid(0.0, ell * simplex.diameter(), nodes);
  p.g.assign(nodes, 0.0);
  p.sigma.assign(nodes, 0.0);
  p.g[0] = 1.0;
  for (std::size_t i = 1; i + 1 < nodes; ++i) {
    const auto e = overlap_kernel(Vec3::Zero(), Vec3(0, 0, p.x[i]), simplex, ell, samples,
                                  kernels::mix_seed(seed, i), exec);
    p.g[i] = e.estimate;
    p.sigma[i] = e.std_error;
  }
  return p;
}

std::vector<double> sine_transform_weights(const std::vector<double> &x, double k) {
  if (!(k > 0))
    throw DomainError("sine_transform_weights: k must be positive");
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i], b = x[i + 1], h = b - a;
    // Split long segments so the Gauss rule sees at most a quarter period.
    const auto pieces =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(h * k / (0.5 * kPi))));
    const double dh = h / static_cast<double>(pieces);
    for (std::size_t j = 0; j < pieces; ++j) {
      const double lo = a + dh * j, hi = lo + dh;
      w[i] += gauss_legendre10([&](double t) { return std::sin(k * t) * (b - t) / h; }, lo, hi);
      w[i + 1] +=
          gauss_legendre10([&](double t) { return std::sin(k * t) * (t - a) / h; }, lo, hi);
    }
  }
  for (auto &v : w)
    v *= 4.0 * kPi / k;
  return w;
}

std::string PositiveTypeReport::status_name() const {
  switch (status) {
  case Status::positive:
    return "positive";
  case Status::negative:
    return "negative";
  default:
    return "inconclusive";
  }
}

std::vector<double> default_k_grid(const Simplex &simplex, double ell, std::size_t n) {
  check_ell(ell);
  const double L = ell * simplex.diameter();
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i)
    k[i] = 0.05 / L * std::pow(160.0, static_cast<double>(i) / static_cast<double>(n - 1));
  return k;
}

PositiveTypeReport gs_positive_type_check(const Simplex &simplex, double ell,
                                          std::size_t radial_nodes,
                                          std::uint64_t samples_per_node,
                                          const std::vector<double> &k_grid, std::uint64_t seed,
                                          kernels::Exec exec) {
  if (k_grid.empty())
    throw DomainError("gs_positive_type_check: empty k grid");
  PositiveTypeReport rep;
  rep.profile = radial_overlap_profile(simplex, ell, radial_nodes, samples_per_node, seed, exec);
  rep.k = k_grid;
  rep.min_value = std::numeric_limits<double>::infinity();
  rep.min_sigma_units = std::numeric_limits<double>::infinity();
  bool all_resolved = true, any_negative = false;
  for (double k : k_grid) {
    const auto w = sine_transform_weights(rep.profile.x, k);
    double v = 4.0 * kPi / (k * k), var = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      v -= w[i] * rep.profile.g[i];
      var += w[i] * w[i] * rep.profile.sigma[i] * rep.profile.sigma[i];
    }
    const double s = std::sqrt(var);
    rep.value.push_back(v);
    rep.sigma.push_back(s);
    rep.min_value = std::min(rep.min_value, v);
    if (s > 0)
      rep.min_sigma_units = std::min(rep.min_sigma_units, v / s);
    if (v < -3 * s)
      any_negative = true;
    if (v < 3 * s)
      all_resolved = false;
  }
  rep.status = any_negative ? PositiveTypeReport::Status::negative
               : all_resolved ? PositiveTypeReport::Status::positive
                              : PositiveTypeReport::Status::inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------

SlidingReport sliding_inequality_experiment(const coulomb::ChargeConfiguration &c,
                                            const Simplex &simplex,
                                            const std::vector<double> &ell_list,
                                            std::uint64_t samples, std::uint64_t seed,
                                            kernels::Exec exec) {
  if (c.size() < 2)
    throw DomainError("sliding_inequality_experiment: need at least two particles");
  if (samples < 1000)
    throw DomainError("sliding_inequality_experiment: need at least 1000 samples");
  const auto &x = c.positions();
  const auto &q = c.charges();
  const std::size_t n = c.size();
  const double exact = coulomb::exact_coulomb_energy(c, kernels::Exec::serial);
  const double q2 = c.sum_q_squared();

  std::vector<double> pair_w; // Q_i Q_j / r_ij, i < j
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      pair_w.push_back(q[i] * q[j] / (x[i] - x[j]).norm());

  SlidingReport rep;
  for (std::size_t li = 0; li < ell_list.size(); ++li) {
    const double ell = ell_list[li];
    check_ell(ell);
    const PlacedSimplex placed(simplex, ell);
    const Box cell = translation_cell(x, simplex, ell);
    const double weight = cell.volume() / placed.s.volume();
    // Y = weight * sum_{i<j} w_ij (1_i 1_j - (1_i + 1_j)/2) has mean
    // average - exact, since each single-point indicator has mean 1/weight.
    const auto m = kernels::sharded_monte_carlo(
        samples, kernels::mix_seed(seed, li), 2,
        [&](std::mt19937_64 &rng, std::uint64_t ns, std::span<kernels::Moments> out) {
          std::vector<char> in(n);
          for (std::uint64_t s = 0; s < ns; ++s) {
            const auto g = sample_isometry(rng, cell);
            for (std::size_t i = 0; i < n; ++i)
              in[i] = placed.s.contains(g.inverse_apply(x[i]));
            double restricted = 0, y = 0;
            std::size_t k = 0;
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = i + 1; j < n; ++j, ++k) {
                const double both = (in[i] && in[j]) ? 1.0 : 0.0;
                restricted += pair_w[k] * both;
                y += pair_w[k] * (both - 0.5 * (in[i] + in[j]));
              }
            out[0].push(weight * restricted);
            out[1].push(weight * y);
          }
        },
        exec);
    SlidingRow row;
    row.ell = ell;
    row.average = m[0].mean();
    row.exact = exact;
    row.excess = m[1].mean();
    row.excess_se = m[1].std_error();
    row.D = row.excess * ell / q2;
    row.D_se = row.excess_se * ell / q2;
    rep.rows.push_back(row);
  }

  rep.C_fit = -std::numeric_limits<double>::infinity();
  for (const auto &r : rep.rows)
    rep.C_fit = std::max(rep.C_fit, r.D + 3 * r.D_se);

  // Weighted least squares of D against log(ell) over the upper half.
  const std::size_t start = rep.rows.size() / 2;
  if (rep.rows.size() - start >= 2) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = start; i < rep.rows.size(); ++i) {
      const auto &r = rep.rows[i];
      const double w = r.D_se > 0 ? 1.0 / (r.D_se * r.D_se) : 1e300;
      const double lx = std::log(r.ell);
      sw += w;
      sx += w * lx;
      sy += w * r.D;
      sxx += w * lx * lx;
      sxy += w * lx * r.D;
    }
    const double den = sw * sxx - sx * sx;
    if (den > 0) {
      rep.top_slope = (sw * sxy - sx * sy) / den;
      rep.top_slope_se = std::sqrt(sw / den);
      rep.no_upward_trend = rep.top_slope < 3 * rep.top_slope_se;
    }
  }
  return rep;
}

} // namespace qcg::gs
