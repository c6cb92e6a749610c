#include "qcg/instability.hpp"
#include "qcg/errors.hpp"
#include "qcg/lieb_thirring.hpp"
#include "qcg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcg::inst {

TwoBodyTrialState TwoBodyTrialState::separable(double a) {
  TwoBodyTrialState t;
  t.kind = Kind::separable;
  t.a = a;
  t.validate();
  return t;
}

TwoBodyTrialState TwoBodyTrialState::correlated(double b, double c) {
  TwoBodyTrialState t;
  t.kind = Kind::correlated;
  t.b = b;
  t.c = c;
  t.validate();
  return t;
}

void TwoBodyTrialState::validate() const {
  const bool ok = kind == Kind::separable ? (a > 0 && std::isfinite(a))
                                          : (b > 0 && c > 0 && std::isfinite(b) && std::isfinite(c));
  if (!ok)
    throw DomainError("TwoBodyTrialState: widths must be positive and finite");
}

double TwoBodyTrialState::momentum_variance() const {
  if (kind == Kind::separable)
    return 1 / (2 * a * a);
  // p1 = P/2 + k with P, k independent
  return 1 / (8 * b * b) + 1 / (2 * c * c);
}

double TwoBodyTrialState::relative_variance() const {
  return kind == Kind::separable ? a * a : c * c / 2;
}

TwoBodyTrialState TwoBodyTrialState::scaled(double ell) const {
  if (!(ell > 0))
    throw DomainError("TwoBodyTrialState::scaled: ell must be positive");
  auto t = *this;
  t.a *= ell;
  t.b *= ell;
  t.c *= ell;
  return t;
}

std::string TwoBodyTrialState::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::separable)
    os << "separable(a=" << a << ")";
  else
    os << "correlated(b=" << b << ", c=" << c << ")";
  return os.str();
}

double relativistic_kinetic(double s2, double m) {
  if (!(s2 > 0) || !(m >= 0))
    throw DomainError("relativistic_kinetic: need variance > 0 and m >= 0");
  const double s = std::sqrt(s2);
  const double norm = 4 * kPi / std::pow(2 * kPi, 1.5);
  // p = s x; sqrt(p^2 + m^2) - m written without cancellation
  return integrate(
      [&](double x) {
        const double p = s * x;
        return norm * x * x * std::exp(-x * x / 2) * p * p / (std::sqrt(p * p + m * m) + m);
      },
      0, 40, 1e-14);
}

double inverse_distance(double v) {
  if (!(v > 0))
    throw DomainError("inverse_distance: variance must be positive");
  const double norm = 4 * kPi / std::pow(2 * kPi, 1.5);
  return integrate([&](double x) { return norm * x * std::exp(-x * x / 2); }, 0, 40, 1e-14) /
         std::sqrt(v);
}

EnergyReport relativistic_two_body_energy(const TwoBodyTrialState &t, double Q, double m,
                                          double ell) {
  t.validate();
  if (!(Q >= 0) || !(m >= 0) || !(ell > 0))
    throw DomainError("relativistic_two_body_energy: need Q >= 0, m >= 0, ell > 0");
  const auto s = t.scaled(ell);
  const double k = relativistic_kinetic(s.momentum_variance(), m);
  EnergyReport r;
  r.name = "relativistic_two_body";
  r.add("kinetic_1", k).add("kinetic_2", k).add("coulomb", -Q * inverse_distance(s.relative_variance()));
  r.provenance = {{"state", t.describe()}, {"Q", Q}, {"m", m}, {"ell", ell}};
  return r;
}

std::vector<TwoBodyTrialState> separable_family(const std::vector<double> &widths) {
  std::vector<TwoBodyTrialState> f;
  for (double a : widths)
    f.push_back(TwoBodyTrialState::separable(a));
  return f;
}

std::vector<TwoBodyTrialState> correlated_family(const std::vector<double> &b,
                                                 const std::vector<double> &c) {
  std::vector<TwoBodyTrialState> f;
  for (double x : b)
    for (double y : c)
      f.push_back(TwoBodyTrialState::correlated(x, y));
  return f;
}

CriticalChargeResult critical_charge_upper_bound(const std::vector<TwoBodyTrialState> &family,
                                                 double eps) {
  if (family.empty())
    throw DomainError("critical_charge_upper_bound: empty family");
  if (!(eps > 0))
    throw DomainError("critical_charge_upper_bound: eps must be positive");
  // Massless energy E_i(Q) = K_i - Q W_i.
  std::vector<double> K(family.size()), W(family.size());
  CriticalChargeResult res{};
  res.ratio_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto r = relativistic_two_body_energy(family[i], 1.0, 0.0, 1.0);
    K[i] = r.term("kinetic_1") + r.term("kinetic_2");
    W[i] = -r.term("coulomb");
    res.ratio_min = std::min(res.ratio_min, K[i] / W[i]);
  }
  auto min_energy = [&](double Q, std::size_t *arg) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < K.size(); ++i) {
      const double e = K[i] - Q * W[i];
      if (e < best) {
        best = e;
        if (arg)
          *arg = i;
      }
    }
    return best;
  };
  double lo = 0, hi = 1;
  while (min_energy(hi, nullptr) >= 0) {
    lo = hi;
    hi *= 2;
    if (hi > 1e12)
      throw ConvergenceError("critical_charge_upper_bound: no negative energy found", hi);
  }
  while (hi - lo > eps) {
    const double mid = 0.5 * (lo + hi);
    (min_energy(mid, nullptr) >= 0 ? lo : hi) = mid;
  }
  min_energy(hi, &res.best);
  res.Q_lo = lo;
  res.Q_hi = hi;
  res.Q_upper = 0.5 * (lo + hi);
  return res;
}

// ---------------------------------------------------------------------------

CollapseReport attractive_collapse_experiment(const std::vector<std::int64_t> &N_list, double R,
                                              double c, int dim,
                                              const std::function<double(double)> &W) {
  if (dim < 1 || dim > 3)
    throw DomainError("attractive_collapse_experiment: unsupported dimension " +
                      std::to_string(dim));
  if (!(R > 0) || !(c > 0))
    throw DomainError("attractive_collapse_experiment: R and c must be positive");
  if (N_list.size() < 2)
    throw DomainError("attractive_collapse_experiment: need at least two N values");
  for (std::size_t i = 0; i < N_list.size(); ++i)
    if (N_list[i] < 1 || (i > 0 && N_list[i] <= N_list[i - 1]))
      throw DomainError("attractive_collapse_experiment: N_list must be increasing and >= 1");
  if (W) {
    for (int i = 0; i <= 1000; ++i) {
      const double r = R * i / 1000.0;
      if (!(W(r) <= -c))
        throw DomainError("attractive_collapse_experiment: W > -c inside the ball (r = " +
                          std::to_string(r) + ")");
    }
  }

  CollapseReport rep;
  rep.dim = dim;
  rep.R = R;
  rep.c = c;
  rep.side = 2 * R / std::sqrt(double(dim));
  rep.target_exponent = double(dim + 2) / dim;
  std::vector<double> xs, ks;
  for (auto N : N_list) {
    CollapseRow row;
    row.N = N;
    row.kinetic = lt::dirichlet_cube_kinetic_sum(N, rep.side, 1.0, dim);
    row.per_particle = row.kinetic / double(N);
    row.estimate = row.per_particle - 0.5 * double(N - 1) * c;
    rep.rows.push_back(row);
    xs.push_back(double(N));
    ks.push_back(row.kinetic);
  }
  rep.kinetic_exponent = lt::fitted_exponent(xs, ks);

  const std::size_t n = rep.rows.size();
  std::size_t start = n;
  for (std::size_t i = n; i-- > 0;) {
    const bool neg = rep.rows[i].estimate < 0;
    const bool dec = i + 1 == n || rep.rows[i + 1].estimate < rep.rows[i].estimate;
    if (!(neg && dec))
      break;
    start = i;
  }
  if (start < n)
    rep.N_negative = rep.rows[start].N;

  const std::size_t h = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = h; i < n; ++i) {
    const double x = double(rep.rows[i].N), y = rep.rows[i].estimate;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = double(n - h);
  rep.tail_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.conclusion =
      dim > 2 && rep.N_negative && rep.tail_slope < 0 ? "unstable" : "inconclusive";
  return rep;
}

} // namespace qcg::inst
