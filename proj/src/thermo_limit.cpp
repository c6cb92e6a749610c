#include "qcg/thermo_limit.hpp"
#include "qcg/errors.hpp"
#include "qcg/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace qcg::thermo {

namespace {

constexpr double kRasterSlack = 1e-9;

double plane_eps(double scale) { return 1e-10 * (1.0 + scale); }

} // namespace

Domain::Domain(Kind k, std::vector<Plane> planes) : kind_(k), planes_(std::move(planes)) {
  build();
}

Domain Domain::empty() { return Domain(Kind::empty, {}); }

Domain Domain::box(const Vec3 &center, double side, const Mat3 &rotation) {
  if (!(side > 0) || !std::isfinite(side))
    throw DomainError("Domain::box: side must be positive");
  if ((rotation.transpose() * rotation - Mat3::Identity()).norm() > 1e-10 ||
      rotation.determinant() < 0)
    throw DomainError("Domain::box: rotation must be orthogonal with det +1");
  std::vector<Plane> p;
  for (int k = 0; k < 3; ++k)
    for (double s : {1.0, -1.0}) {
      const Vec3 n = s * rotation.col(k);
      p.push_back({n, n.dot(center) + side / 2});
    }
  Domain d(Kind::box, std::move(p));
  d.side_ = side;
  d.aligned_ = (rotation - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0;
  return d;
}

Domain Domain::scaled_simplex(const gs::Simplex &s, double ell, const gs::IsometrySample &g) {
  if (!(ell > 0) || !std::isfinite(ell))
    throw DomainError("Domain::scaled_simplex: ell must be positive");
  const Vec3 c = s.centroid();
  std::array<Vec3, 4> w;
  for (int i = 0; i < 4; ++i)
    w[i] = g.apply(ell * (s.vertices()[i] - c));
  std::vector<Plane> p;
  for (int i = 0; i < 4; ++i) {
    const Vec3 &a = w[(i + 1) % 4], &b = w[(i + 2) % 4], &e = w[(i + 3) % 4];
    Vec3 n = (b - a).cross(e - a).normalized();
    if (n.dot(w[i] - a) > 0)
      n = -n;
    p.push_back({n, n.dot(a)});
  }
  return Domain(Kind::simplex, std::move(p));
}

Domain Domain::path_simplex(const Vec3 &corner, double side) {
  if (!(side > 0) || !std::isfinite(side))
    throw DomainError("Domain::path_simplex: side must be positive");
  const double r2 = 1 / std::sqrt(2.0);
  std::vector<Plane> p{{Vec3(-1, 0, 0), -corner.x()},
                       {Vec3(r2, -r2, 0), r2 * (corner.x() - corner.y())},
                       {Vec3(0, r2, -r2), r2 * (corner.y() - corner.z())},
                       {Vec3(0, 0, 1), corner.z() + side}};
  Domain d(Kind::simplex, std::move(p));
  d.side_ = side;
  d.path_ = true;
  d.corner_ = corner;
  return d;
}

void Domain::build() {
  vertices_.clear();
  volume_ = 0;
  if (planes_.empty())
    return;
  double scale = 0;
  for (const auto &p : planes_)
    scale = std::max(scale, std::abs(p.c));
  const double eps = plane_eps(scale);

  // Drop duplicated planes so each face is counted once.
  std::vector<Plane> uniq;
  for (const auto &p : planes_) {
    bool dup = false;
    for (const auto &q : uniq)
      if ((p.n - q.n).norm() < 1e-12 && std::abs(p.c - q.c) < eps) {
        dup = true;
        break;
      }
    if (!dup)
      uniq.push_back(p);
  }
  planes_ = std::move(uniq);

  const std::size_t np = planes_.size();
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = i + 1; j < np; ++j)
      for (std::size_t k = j + 1; k < np; ++k) {
        Mat3 A;
        A.row(0) = planes_[i].n;
        A.row(1) = planes_[j].n;
        A.row(2) = planes_[k].n;
        if (std::abs(A.determinant()) < 1e-12)
          continue;
        const Vec3 x = A.partialPivLu().solve(Vec3(planes_[i].c, planes_[j].c, planes_[k].c));
        if (!contains(x, eps))
          continue;
        bool seen = false;
        for (const auto &v : vertices_)
          if ((v - x).norm() < 10 * eps) {
            seen = true;
            break;
          }
        if (!seen)
          vertices_.push_back(x);
      }
  if (vertices_.size() < 4) {
    vertices_.clear();
    return;
  }

  Vec3 interior = Vec3::Zero();
  for (const auto &v : vertices_)
    interior += v;
  interior /= double(vertices_.size());

  double vol = 0;
  for (const auto &p : planes_) {
    std::vector<Vec3> face;
    for (const auto &v : vertices_)
      if (std::abs(p.n.dot(v) - p.c) < 10 * eps)
        face.push_back(v);
    if (face.size() < 3)
      continue;
    Vec3 fc = Vec3::Zero();
    for (const auto &v : face)
      fc += v;
    fc /= double(face.size());
    const Vec3 u = (std::abs(p.n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(p.n).normalized();
    const Vec3 w = p.n.cross(u);
    std::sort(face.begin(), face.end(), [&](const Vec3 &a, const Vec3 &b) {
      return std::atan2((a - fc).dot(w), (a - fc).dot(u)) <
             std::atan2((b - fc).dot(w), (b - fc).dot(u));
    });
    double area = 0;
    for (std::size_t i = 0; i < face.size(); ++i)
      area += 0.5 * (face[i] - fc).cross(face[(i + 1) % face.size()] - fc).dot(p.n);
    vol += area * (p.c - p.n.dot(interior)) / 3.0;
  }
  if (vol <= eps * eps * eps) {
    vertices_.clear();
    return;
  }
  volume_ = vol;
}

std::string Domain::kind_name() const {
  switch (kind_) {
  case Kind::empty: return "empty";
  case Kind::box: return "box";
  case Kind::simplex: return "simplex";
  case Kind::polytope: return "polytope";
  }
  return "unknown";
}

bool Domain::axis_aligned_box() const { return kind_ == Kind::box && aligned_; }

Domain Domain::intersect(const Domain &o) const {
  if (is_empty() || o.is_empty())
    return empty();
  auto p = planes_;
  p.insert(p.end(), o.planes_.begin(), o.planes_.end());
  return Domain(Kind::polytope, std::move(p));
}

Domain Domain::translated(const Vec3 &z) const {
  Domain d = *this;
  d.corner_ += z;
  for (auto &p : d.planes_)
    p.c += p.n.dot(z);
  for (auto &v : d.vertices_)
    v += z;
  return d;
}

bool Domain::contains(const Vec3 &p, double slack) const {
  if (planes_.empty())
    return false;
  for (const auto &pl : planes_)
    if (pl.n.dot(p) > pl.c + slack)
      return false;
  return true;
}

std::pair<Vec3, Vec3> Domain::bounding_box() const {
  if (vertices_.empty())
    throw DomainError("Domain::bounding_box: empty domain");
  Vec3 lo = vertices_[0], hi = vertices_[0];
  for (const auto &v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

double Domain::boundary_distance_to(const Domain &inner) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto &p : planes_)
    for (const auto &v : inner.vertices_)
      d = std::min(d, p.c - p.n.dot(v));
  return d;
}

// ---------------------------------------------------------------------------

EnergyMap zero_map() {
  return {"zero", [](const Domain &) { return 0.0; }, {}};
}

EnergyMap negative_volume_map() {
  return {"negative_volume", [](const Domain &d) { return -d.volume(); }, {}};
}

double free_fermion_box_energy(double side, double mu, double m) {
  if (!(mu < 0))
    throw DomainError("free_fermion_box_energy: mu must be negative (the sum is unbounded)");
  if (!(side > 0) || !(m > 0))
    throw DomainError("free_fermion_box_energy: side and mass must be positive");
  const double q = kPi * kPi / (2 * m * side * side);
  const double R2 = -mu / q; // filled modes have |n|^2 < R2
  if (R2 > 1e10)
    throw ResolutionError("free_fermion_box_energy: too many filled modes");
  double total = 0;
  for (long n1 = 1; n1 * n1 + 2 < R2; ++n1)
    for (long n2 = 1; n1 * n1 + n2 * n2 + 1 < R2; ++n2) {
      const double s = double(n1 * n1 + n2 * n2);
      long K = static_cast<long>(std::sqrt(std::max(0.0, R2 - s)));
      while (K > 0 && double(K) * K + s >= R2)
        --K;
      while (double(K + 1) * (K + 1) + s < R2)
        ++K;
      const double sq = double(K) * (K + 1) * (2 * K + 1) / 6.0;
      total += K * (q * s + mu) + q * sq;
    }
  return total;
}

double free_fermion_path_simplex_energy(double side, double mu, double m) {
  if (!(mu < 0))
    throw DomainError("free_fermion_path_simplex_energy: mu must be negative (the sum is unbounded)");
  if (!(side > 0) || !(m > 0))
    throw DomainError("free_fermion_path_simplex_energy: side and mass must be positive");
  const double q = kPi * kPi / (2 * m * side * side);
  const double R2 = -mu / q;
  if (R2 > 1e10)
    throw ResolutionError("free_fermion_path_simplex_energy: too many filled modes");
  auto sum_sq = [](double n) { return n * (n + 1) * (2 * n + 1) / 6.0; };
  double total = 0;
  for (long n1 = 1; 3 * n1 * n1 < R2; ++n1)
    for (long n2 = n1 + 1; n1 * n1 + 2 * n2 * n2 < R2; ++n2) {
      const double s = double(n1 * n1 + n2 * n2);
      long K = static_cast<long>(std::sqrt(std::max(0.0, R2 - s)));
      while (K > 0 && double(K) * K + s >= R2)
        --K;
      while (double(K + 1) * (K + 1) + s < R2)
        ++K;
      if (K <= n2)
        continue;
      total += double(K - n2) * (q * s + mu) + q * (sum_sq(K) - sum_sq(n2));
    }
  return total;
}

double free_fermion_density(double mu, double m) {
  if (!(mu < 0) || !(m > 0))
    throw DomainError("free_fermion_density: need mu < 0 and m > 0");
  return -std::pow(2.0, 2.5) / (30 * kPi * kPi) * std::pow(m, 1.5) * std::pow(-mu, 2.5);
}

EnergyMap continuum_fermion_map(double mu, double m) {
  free_fermion_density(mu, m); // validates
  return {"continuum_fermion",
          [mu, m](const Domain &d) {
            if (d.is_empty())
              return 0.0;
            if (d.is_path_simplex())
              return free_fermion_path_simplex_energy(d.side(), mu, m);
            if (d.kind() != Domain::Kind::box)
              throw ShapeError("continuum_fermion_map: no closed-form spectrum for a " +
                               d.kind_name());
            return free_fermion_box_energy(d.side(), mu, m);
          },
          {}};
}

// ---------------------------------------------------------------------------

namespace {

void check_model(const LatticeModel &model) {
  if (!(model.mu < 0))
    throw DomainError("lattice model: mu must be negative");
  if (!(model.m > 0) || !(model.h > 0))
    throw DomainError("lattice model: m and h must be positive");
}

struct Sites {
  std::vector<std::array<long, 3>> idx;
};

Sites rasterize(const Domain &d, double h) {
  Sites s;
  if (d.is_empty())
    return s;
  const auto [lo, hi] = d.bounding_box();
  std::array<long, 3> a, b;
  for (int k = 0; k < 3; ++k) {
    a[k] = static_cast<long>(std::ceil(lo[k] / h - kRasterSlack));
    b[k] = static_cast<long>(std::floor(hi[k] / h + kRasterSlack));
  }
  for (long i = a[0]; i <= b[0]; ++i)
    for (long j = a[1]; j <= b[1]; ++j)
      for (long k = a[2]; k <= b[2]; ++k)
        if (d.contains(h * Vec3(double(i), double(j), double(k)), kRasterSlack * h))
          s.idx.push_back({i, j, k});
  return s;
}

// Number of lattice points i h in [c - s/2, c + s/2].
long axis_count(double center, double side, double h) {
  const long a = static_cast<long>(std::ceil((center - side / 2) / h - kRasterSlack));
  const long b = static_cast<long>(std::floor((center + side / 2) / h + kRasterSlack));
  return std::max(0L, b - a + 1);
}

std::vector<double> chain_levels(long n, double c) {
  std::vector<double> v(n);
  for (long j = 1; j <= n; ++j)
    v[j - 1] = c * (1 - std::cos(kPi * double(j) / double(n + 1)));
  return v;
}

// Sites i0 <= i < j < k <= i0 + M - 1: the antisymmetric states of an M^3 cube.
double antisymmetric_energy(long M, const LatticeModel &model) {
  const auto z = chain_levels(M, 1.0 / (model.m * model.h * model.h)); // increasing
  std::vector<double> prefix(z.size() + 1, 0.0);
  for (std::size_t i = 0; i < z.size(); ++i)
    prefix[i + 1] = prefix[i] + z[i];
  double total = 0;
  for (long a = 0; a < M; ++a)
    for (long b = a + 1; b < M; ++b) {
      const double base = z[a] + z[b] + model.mu;
      const auto end = std::lower_bound(z.begin() + b + 1, z.end(), -base) - z.begin();
      if (end > b + 1)
        total += double(end - b - 1) * base + prefix[end] - prefix[b + 1];
    }
  return total;
}

// Number of chain positions when the path-simplex sites are i < j < k, else -1.
long path_chain_length(const Domain &d, double h) {
  const Vec3 &c = d.corner();
  const double d1 = (c.y() - c.x()) / h, d2 = (c.z() - c.y()) / h;
  if (!(d1 > 1e-6 && d1 <= 1 && d2 > 1e-6 && d2 <= 1))
    return -1;
  const long i0 = static_cast<long>(std::ceil(c.x() / h - kRasterSlack));
  const long k1 = static_cast<long>(std::floor((c.z() + d.side()) / h + kRasterSlack));
  return std::max(0L, k1 - i0 + 1);
}

double separable_energy(std::array<long, 3> M, const LatticeModel &model) {
  const double c = 1.0 / (model.m * model.h * model.h);
  auto levels = [&](long n) { return chain_levels(n, c); };
  const auto x = levels(M[0]), y = levels(M[1]);
  auto z = levels(M[2]);
  std::sort(z.begin(), z.end());
  std::vector<double> prefix(z.size() + 1, 0.0);
  for (std::size_t i = 0; i < z.size(); ++i)
    prefix[i + 1] = prefix[i] + z[i];
  double total = 0;
  for (double a : x)
    for (double b : y) {
      const double base = a + b + model.mu;
      // count of z with base + z < 0
      const auto n = std::lower_bound(z.begin(), z.end(), -base) - z.begin();
      total += double(n) * base + prefix[n];
    }
  return total;
}

} // namespace

std::size_t lattice_site_count(const Domain &d, double h) {
  if (!(h > 0))
    throw DomainError("lattice_site_count: h must be positive");
  if (d.axis_aligned_box()) {
    const auto [lo, hi] = d.bounding_box();
    const Vec3 c = 0.5 * (lo + hi);
    std::size_t n = 1;
    for (int k = 0; k < 3; ++k)
      n *= static_cast<std::size_t>(axis_count(c[k], d.side(), h));
    return n;
  }
  if (d.is_path_simplex()) {
    const long M = path_chain_length(d, h);
    if (M >= 0)
      return static_cast<std::size_t>(M * (M - 1) * (M - 2) / 6);
  }
  return rasterize(d, h).idx.size();
}

double lattice_fermion_energy(const Domain &d, const LatticeModel &model) {
  check_model(model);
  if (d.is_empty())
    return 0.0;
  if (d.axis_aligned_box()) {
    const auto [lo, hi] = d.bounding_box();
    const Vec3 c = 0.5 * (lo + hi);
    std::array<long, 3> M;
    for (int k = 0; k < 3; ++k)
      M[k] = axis_count(c[k], d.side(), model.h);
    return separable_energy(M, model);
  }
  if (d.is_path_simplex()) {
    const long M = path_chain_length(d, model.h);
    if (M >= 0)
      return antisymmetric_energy(M, model);
  }
  const auto sites = rasterize(d, model.h);
  const std::size_t n = sites.idx.size();
  if (n == 0)
    return 0.0;
  if (n > model.max_dense_sites)
    throw ResolutionError("lattice_fermion_energy: " + std::to_string(n) +
                          " sites exceed the dense-solver limit");
  auto key = [](const std::array<long, 3> &a) {
    return (static_cast<std::uint64_t>(a[0] + (1L << 20)) << 42) |
           (static_cast<std::uint64_t>(a[1] + (1L << 20)) << 21) |
           static_cast<std::uint64_t>(a[2] + (1L << 20));
  };
  std::unordered_map<std::uint64_t, Eigen::Index> where;
  for (std::size_t i = 0; i < n; ++i)
    where.emplace(key(sites.idx[i]), Eigen::Index(i));
  const double hop = 1.0 / (2 * model.m * model.h * model.h);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    H(i, i) = 6 * hop;
    for (int k = 0; k < 3; ++k) {
      auto nb = sites.idx[i];
      ++nb[k];
      const auto it = where.find(key(nb));
      if (it != where.end()) {
        H(i, it->second) = -hop;
        H(it->second, i) = -hop;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("lattice_fermion_energy: eigensolver failed", 0.0);
  double total = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    total += std::min(0.0, es.eigenvalues()[i] + model.mu);
  return total;
}

double lattice_bulk_density(const LatticeModel &model) {
  check_model(model);
  const double c = 1.0 / (model.m * model.h * model.h);
  const double mu = model.mu;
  // int_{-pi}^{pi} min(0, A + c (1 - cos k)) dk in closed form.
  auto inner = [c](double A) {
    const double t = 1 + A / c;
    if (t >= 1)
      return 0.0;
    if (t <= -1)
      return 2 * kPi * (A + c);
    const double th = std::acos(t);
    return 2 * th * (A + c) - 2 * c * std::sin(th);
  };
  // Split both integrals where the piecewise form of `inner` changes.
  auto pieces = [](std::vector<double> cosines) {
    std::vector<double> cuts{0.0, kPi};
    for (double v : cosines)
      if (v > -1 && v < 1)
        cuts.push_back(std::acos(v));
    std::sort(cuts.begin(), cuts.end());
    return cuts;
  };
  auto piecewise = [](const std::vector<double> &cuts, const std::function<double(double)> &f,
                      double tol) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      if (cuts[i + 1] > cuts[i])
        s += integrate_singular(f, cuts[i], cuts[i + 1], tol);
    return s;
  };
  const double r = mu / c;
  const auto outer_cuts = pieces({r - 1, r + 1, r + 3, r + 5});
  const double per_site =
      piecewise(outer_cuts,
                [&](double k1) {
                  const double b = 2 - std::cos(k1) + r;
                  return piecewise(
                      pieces({b, b + 2}),
                      [&](double k2) { return inner(mu + c * (2 - std::cos(k1) - std::cos(k2))); },
                      1e-12);
                },
                1e-11) *
      4 / std::pow(2 * kPi, 3);
  return per_site / std::pow(model.h, 3);
}

EnergyMap lattice_fermion_map(const LatticeModel &model) {
  check_model(model);
  return {"lattice_fermion",
          [model](const Domain &d) { return lattice_fermion_energy(d, model); },
          [model](const Domain &d) {
            return double(lattice_site_count(d, model.h)) * std::pow(model.h, 3);
          }};
}

// ---------------------------------------------------------------------------

std::string AxiomResult::status_name() const {
  switch (status) {
  case Status::pass: return "pass";
  case Status::fail: return "fail";
  case Status::skipped: return "skipped";
  }
  return "unknown";
}

namespace {

double eval_named(const EnergyMap &em, const Domain &d, const char *what, std::size_t i) {
  try {
    return em.evaluate(d);
  } catch (const std::exception &e) {
    std::ostringstream os;
    os << em.name << ": evaluation failed on " << what << " #" << i << " (" << d.kind_name()
       << ", volume " << d.volume() << "): " << e.what();
    throw DomainError(os.str());
  }
}

void finish(AxiomResult &r, double worst) {
  r.worst_margin = worst;
  r.status = r.checked == 0 ? AxiomResult::Status::skipped
             : worst >= 0   ? AxiomResult::Status::pass
                            : AxiomResult::Status::fail;
}

} // namespace

std::vector<AxiomResult> axiom_check(const EnergyMap &em, const AxiomSuite &suite, double kappa,
                                     const std::function<double(double)> &alpha,
                                     const AxiomOptions &opt) {
  if (suite.domains.empty())
    throw DomainError("axiom_check: suite must be nonempty");
  if (!(kappa >= 0))
    throw DomainError("axiom_check: kappa must be nonnegative");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<AxiomResult> out;

  std::vector<double> E(suite.domains.size());
  for (std::size_t i = 0; i < E.size(); ++i)
    E[i] = eval_named(em, suite.domains[i], "domain", i);

  {
    AxiomResult r;
    r.axiom = "A1";
    const double e0 = em.evaluate(Domain::empty());
    r.checked = 1;
    finish(r, e0 == 0.0 ? 0.0 : -std::abs(e0));
    r.detail = "E(empty) = " + std::to_string(e0);
    out.push_back(r);
  }
  {
    AxiomResult r;
    r.axiom = "A2";
    double worst = inf;
    for (std::size_t i = 0; i < E.size(); ++i) {
      const double bound = -kappa * suite.domains[i].volume();
      const double slack = opt.tolerance * (std::abs(E[i]) + std::abs(bound));
      worst = std::min(worst, E[i] - bound + slack);
      ++r.checked;
    }
    finish(r, worst);
    r.detail = "min over domains of E + kappa |Omega|";
    out.push_back(r);
  }
  {
    AxiomResult r;
    r.axiom = "A3";
    double worst = inf;
    for (std::size_t i = 0; i < E.size(); ++i)
      for (const auto &z : suite.integer_shifts) {
        if ((z - z.array().round().matrix()).norm() != 0)
          throw DomainError("axiom_check: shifts must be integer vectors");
        const double e = eval_named(em, suite.domains[i].translated(z), "shifted domain", i);
        worst = std::min(worst, opt.tolerance * (1 + std::abs(E[i])) - std::abs(e - E[i]));
        ++r.checked;
      }
    finish(r, worst);
    r.detail = "tolerance minus |E(Omega + z) - E(Omega)|";
    out.push_back(r);
  }
  {
    AxiomResult r;
    r.axiom = "A4";
    double worst = inf;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < suite.nested.size(); ++i) {
      const auto &[outer, inner] = suite.nested[i];
      if (!(outer.boundary_distance_to(inner) > opt.delta)) {
        ++skipped;
        continue;
      }
      const double Eo = eval_named(em, outer, "nested outer", i);
      const double Ei = eval_named(em, inner, "nested inner", i);
      const double V = outer.volume();
      const double rhs = Ei + kappa * (V - inner.volume()) + V * alpha(V);
      worst = std::min(worst, rhs - Eo + opt.tolerance * (std::abs(Eo) + std::abs(rhs)));
      ++r.checked;
    }
    finish(r, worst);
    r.detail = "pairs separated by more than delta; " + std::to_string(skipped) + " skipped";
    out.push_back(r);
  }
  {
    AxiomResult r;
    r.axiom = "A5";
    double worst = inf;
    const auto S = opt.simplex.centered();
    const double tri = S.volume() * std::pow(opt.a5_ell, 3);
    try {
      for (std::size_t i = 0; i < E.size(); ++i) {
        const Domain &dom = suite.domains[i];
        const auto [lo, hi] = dom.bounding_box();
        const auto cell = gs::translation_cell({lo, hi}, S, opt.a5_ell);
        const double weight = cell.volume() / tri;
        const auto m = kernels::sharded_monte_carlo(
            opt.a5_samples, kernels::mix_seed(opt.seed, i), 1,
            [&](std::mt19937_64 &rng, std::uint64_t n, std::span<kernels::Moments> acc) {
              for (std::uint64_t s = 0; s < n; ++s) {
                const auto g = gs::sample_isometry(rng, cell);
                const Domain piece = dom.intersect(Domain::scaled_simplex(S, opt.a5_ell, g));
                acc[0].push(weight * em.evaluate(piece));
              }
            });
        const double rhs = m[0].mean() - dom.volume() * alpha(opt.a5_ell);
        worst = std::min(worst, E[i] - rhs + 3 * m[0].std_error());
        ++r.checked;
      }
      finish(r, worst);
      r.detail = "E - (average - |Omega| alpha(ell)) + 3 standard errors";
    } catch (const ShapeError &e) {
      r.status = AxiomResult::Status::skipped;
      r.checked = 0;
      r.detail = std::string("not applicable: ") + e.what();
    }
    out.push_back(r);
  }
  return out;
}

AxiomSuite random_suite(std::uint64_t seed, std::size_t boxes, std::size_t simplices,
                        double min_size, double max_size) {
  if (!(min_size > 0) || !(max_size >= min_size))
    throw DomainError("random_suite: need 0 < min_size <= max_size");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> size(min_size, max_size), pos(-3.0, 3.0);
  AxiomSuite s;
  const auto S = gs::Simplex::regular();
  for (std::size_t i = 0; i < boxes; ++i) {
    const double side = size(rng);
    const Vec3 c(pos(rng), pos(rng), pos(rng));
    const Mat3 R = (i % 2 == 0) ? Mat3::Identity() : gs::haar_rotation(rng);
    s.domains.push_back(Domain::box(c, side, R));
    s.nested.emplace_back(Domain::box(c, side, R), Domain::box(c, 0.5 * side, R));
  }
  for (std::size_t i = 0; i < simplices; ++i) {
    // Regular unit simplex volume is about 0.118; scale so sizes are comparable to boxes.
    const double ell = 2.0 * size(rng);
    const gs::IsometrySample g{gs::haar_rotation(rng), Vec3(pos(rng), pos(rng), pos(rng))};
    s.domains.push_back(Domain::scaled_simplex(S, ell, g));
    s.nested.emplace_back(Domain::scaled_simplex(S, ell, g),
                          Domain::scaled_simplex(S, 0.5 * ell, g));
  }
  s.integer_shifts = {Vec3(1, 0, 0), Vec3(0, -2, 1), Vec3(3, 1, -1)};
  return s;
}

// ---------------------------------------------------------------------------

double ExtrapolationReport::e_inf_error() const { return std::hypot(e_inf_se, e_inf_systematic); }

ExtrapolationReport thermodynamic_extrapolation(const EnergyMap &em,
                                                const std::function<Domain(double)> &shape,
                                                const std::vector<double> &L_list) {
  if (L_list.size() < 3)
    throw DomainError("thermodynamic_extrapolation: need at least 3 scales");
  for (std::size_t i = 1; i < L_list.size(); ++i)
    if (!(L_list[i] > L_list[i - 1]))
      throw DomainError("thermodynamic_extrapolation: L_list must be increasing");
  if (!(L_list.front() > 0))
    throw DomainError("thermodynamic_extrapolation: scales must be positive");

  ExtrapolationReport r;
  r.L = L_list;
  const auto n = L_list.size();
  r.e = kernels::map_indices<double>(n, [&](std::size_t i) {
    const Domain d = shape(L_list[i]);
    const double V = em.volume_of(d);
    if (!(V > 0))
      throw DomainError("thermodynamic_extrapolation: empty domain at L = " +
                        std::to_string(L_list[i]));
    return eval_named(em, d, "scale", i) / V;
  });

  auto fit = [&](std::size_t first) {
    const std::size_t k = n - first;
    Eigen::MatrixXd X(k, 3);
    Eigen::VectorXd y(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double L = L_list[first + i];
      X(i, 0) = 1;
      X(i, 1) = 1 / L;
      X(i, 2) = 1 / (L * L);
      y[i] = r.e[first + i];
    }
    const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd res = y - X * beta;
    double se = 0;
    if (k > 3) {
      const Eigen::Matrix3d cov = res.squaredNorm() / double(k - 3) * (X.transpose() * X).inverse();
      se = std::sqrt(std::max(0.0, cov(0, 0)));
    }
    return std::tuple{beta, res, se};
  };
  const auto [beta, res, se] = fit(0);
  r.e_inf = beta[0];
  r.a = beta[1];
  r.b = beta[2];
  r.residual_rms = std::sqrt(res.squaredNorm() / double(n));
  r.e_inf_se = se;
  if (n >= 8)
    r.e_inf_systematic = std::abs(std::get<0>(fit(n / 2))[0] - r.e_inf);
  const Eigen::Map<const Eigen::VectorXd> y(r.e.data(), Eigen::Index(n));
  const double spread = y.maxCoeff() - y.minCoeff();
  r.fit_warning = n < 4 || r.residual_rms > 0.25 * spread;
  return r;
}

} // namespace qcg::thermo
