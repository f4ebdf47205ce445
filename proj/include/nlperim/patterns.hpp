#ifndef NLPERIM_PATTERNS_HPP
#define NLPERIM_PATTERNS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "autocorr.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace nlperim {

// ---------------------------------------------------------------- stripes

/// Energy per unit volume of periodic stripes under K = r^{-d}.
inline double stripe_energy(const StripePattern& p)
{
  p.validate();
  const int d = p.dimension;
  const double a = p.period(), lam = p.fraction();
  if (!(lam > 0.0 && lam < 1.0)) throw ParameterError("degenerate stripe pattern");
  const double hh = 0.5 * harmonic_number(0.5 * (d - 1));
  return -(2.0 * ball_volume(d - 1) / a) * (1.0 + hh + std::log(a * std::sin(pi * lam) / pi));
}

/// Slice-interaction series with symmetric grouping of the k-th neighbours.
inline double stripe_energy_via_slices(const StripePattern& p, long k_terms)
{
  p.validate();
  if (k_terms < 0) throw ParameterError("k_terms must be >= 0");
  const int d = p.dimension;
  const double a = p.period(), d0 = p.d0;
  const double om = ball_volume(d - 1);
  const double hh = 0.5 * harmonic_number(0.5 * (d - 1));
  auto I = [&](double rho) { return -(om / a) * (std::log(rho) + hh); };
  NeumaierSum sum;
  for (long k = k_terms; k >= 1; --k) {
    double ka = k * a;
    sum.add(I(ka + d0) - 2.0 * I(ka) + I(ka - d0));
  }
  sum.add(I(d0));
  const double perimeter = 2.0 * std::pow(a, d - 1);
  return -om * perimeter / std::pow(a, d) + 2.0 * sum.value();
}

struct OptimalStripe {
  double width = 0.0;  // occupied width d0; the period is width / lambda
  double energy = 0.0;
};

inline OptimalStripe optimal_stripe(double lambda, int d)
{
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("optimal_stripe: lambda must lie in (0,1)");
  if (d < 1 || d > 3) throw ParameterError("optimal_stripe: d must be 1, 2 or 3");
  const double hh = 0.5 * harmonic_number(0.5 * (d - 1));
  const double s = std::sin(pi * lambda);
  return {pi * lambda / s * std::exp(-hh), -2.0 * ball_volume(d - 1) * std::exp(hh) * s / pi};
}

// ---------------------------------------------------------------- lattices

using Vec3 = std::array<double, 3>;

namespace detail {

inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 axpy(double s, const Vec3& x, const Vec3& y) { return {y[0] + s * x[0], y[1] + s * x[1], y[2] + s * x[2]}; }

inline double det(const std::vector<Vec3>& b, int d)
{
  if (d == 1) return b[0][0];
  if (d == 2) return b[0][0] * b[1][1] - b[0][1] * b[1][0];
  return b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
         + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
}

inline double gram_det(const std::vector<Vec3>& v)
{
  const std::size_t k = v.size();
  if (k == 1) return dot3(v[0], v[0]);
  double g[3][3];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) g[i][j] = dot3(v[i], v[j]);
  if (k == 2) return g[0][0] * g[1][1] - g[0][1] * g[1][0];
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
         + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

} // namespace detail

/// Lattice spanned by the rows of `basis` (only the first d components are used).
struct BravaisLattice {
  int dimension = 2;
  std::vector<Vec3> basis;
  std::string name = "custom";

  static BravaisLattice from_rows(const std::vector<std::vector<double>>& rows, std::string name = "custom")
  {
    BravaisLattice L;
    L.dimension = static_cast<int>(rows.size());
    if (L.dimension < 1 || L.dimension > 3) throw ParameterError("lattice basis must have 1 to 3 rows");
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != L.dimension) throw ParameterError("lattice basis must be square");
      Vec3 v{0.0, 0.0, 0.0};
      for (int i = 0; i < L.dimension; ++i) v[i] = r[i];
      L.basis.push_back(v);
    }
    L.name = std::move(name);
    L.validate();
    return L;
  }

  void validate() const
  {
    if (dimension < 1 || dimension > 3) throw ParameterError("lattice dimension must be 1, 2 or 3");
    if (static_cast<int>(basis.size()) != dimension) throw ParameterError("lattice needs d basis vectors");
    double prod = 1.0;
    for (const auto& b : basis) {
      for (int i = 0; i < 3; ++i)
        if (!std::isfinite(b[i]) || (i >= dimension && b[i] != 0.0))
          throw ParameterError("lattice basis entries must be finite and lie in R^d");
      prod *= std::sqrt(detail::dot3(b, b));
    }
    if (!(std::abs(detail::det(basis, dimension)) > 1e-12 * prod))
      throw ParameterError("lattice basis is linearly dependent");
  }

  double volume() const { return std::abs(detail::det(basis, dimension)); }

  BravaisLattice scaled(double a) const
  {
    BravaisLattice L = *this;
    for (auto& b : L.basis)
      for (auto& x : b) x *= a;
    return L;
  }

  /// same lattice, unit cell volume
  BravaisLattice normalized() const { return scaled(std::pow(volume(), -1.0 / dimension)); }

  /// Gauss reduction (d = 2) or LLL with delta = 0.99 (d = 3)
  BravaisLattice reduced() const
  {
    validate();
    BravaisLattice L = *this;
    auto& b = L.basis;
    auto n2 = [](const Vec3& v) { return detail::dot3(v, v); };
    if (dimension == 2) {
      for (int it = 0; it < 10000; ++it) {
        if (n2(b[0]) > n2(b[1])) std::swap(b[0], b[1]);
        double m = std::round(detail::dot3(b[0], b[1]) / n2(b[0]));
        if (m == 0.0) break;
        b[1] = detail::axpy(-m, b[0], b[1]);
      }
    } else if (dimension == 3) {
      int k = 1;
      for (int it = 0; it < 100000 && k < 3; ++it) {
        std::array<Vec3, 3> bs;
        double mu[3][3] = {};
        for (int i = 0; i < 3; ++i) {
          bs[i] = b[i];
          for (int j = 0; j < i; ++j) {
            mu[i][j] = detail::dot3(b[i], bs[j]) / n2(bs[j]);
            bs[i] = detail::axpy(-mu[i][j], bs[j], bs[i]);
          }
        }
        bool changed = false;
        for (int j = k - 1; j >= 0; --j) {
          double m = std::round(mu[k][j]);
          if (m != 0.0) {
            b[k] = detail::axpy(-m, b[j], b[k]);
            for (int l = 0; l <= j; ++l) mu[k][l] -= m * (l == j ? 1.0 : mu[j][l]);
            changed = true;
          }
        }
        if (changed) {
          continue;
        }
        if (n2(bs[k]) >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * n2(bs[k - 1])) {
          ++k;
        } else {
          std::swap(b[k], b[k - 1]);
          k = std::max(k - 1, 1);
        }
      }
    }
    return L;
  }
};

/// Calls f(v, |v|^2) for every nonzero lattice vector with |v| <= R.
template <class F>
void for_each_lattice_vector(const BravaisLattice& lat, double R, F&& f)
{
  const BravaisLattice L = lat.reduced();
  const int d = L.dimension;
  const auto& b = L.basis;
  const double R2 = R * R;
  auto n2 = [](const Vec3& v) { return detail::dot3(v, v); };
  // coefficient bound |c_i| <= R |b_i^*| with b_i^* the dual basis
  auto dual_norm = [&](int i) {
    if (d == 1) return 1.0 / std::abs(b[0][0]);
    std::vector<Vec3> others;
    for (int j = 0; j < d; ++j)
      if (j != i) others.push_back(b[j]);
    return std::sqrt(detail::gram_det(others)) / std::abs(detail::det(b, d));
  };
  // integer range of c with |w + c v|^2 <= R^2
  auto range = [&](const Vec3& w, const Vec3& v, long& lo, long& hi) {
    double A = n2(v), B = detail::dot3(w, v), C = n2(w) - R2;
    double disc = B * B - A * C;
    if (disc < 0.0) {
      lo = 1;
      hi = 0;
      return;
    }
    double sq = std::sqrt(disc);
    lo = static_cast<long>(std::ceil((-B - sq) / A - 1e-9));
    hi = static_cast<long>(std::floor((-B + sq) / A + 1e-9));
  };
  auto emit = [&](const Vec3& v) {
    double r2 = n2(v);
    if (r2 > 0.0 && r2 <= R2) f(v, r2);
  };
  const Vec3 zero{0.0, 0.0, 0.0};
  if (d == 1) {
    long lo, hi;
    range(zero, b[0], lo, hi);
    for (long c = lo; c <= hi; ++c) emit(detail::axpy(static_cast<double>(c), b[0], zero));
  } else if (d == 2) {
    long C1 = static_cast<long>(std::floor(R * dual_norm(0) + 1e-9));
    for (long c1 = -C1; c1 <= C1; ++c1) {
      Vec3 w = detail::axpy(static_cast<double>(c1), b[0], zero);
      long lo, hi;
      range(w, b[1], lo, hi);
      for (long c2 = lo; c2 <= hi; ++c2) emit(detail::axpy(static_cast<double>(c2), b[1], w));
    }
  } else {
    long C1 = static_cast<long>(std::floor(R * dual_norm(0) + 1e-9));
    long C2 = static_cast<long>(std::floor(R * dual_norm(1) + 1e-9));
    for (long c1 = -C1; c1 <= C1; ++c1) {
      Vec3 w1 = detail::axpy(static_cast<double>(c1), b[0], zero);
      for (long c2 = -C2; c2 <= C2; ++c2) {
        Vec3 w = detail::axpy(static_cast<double>(c2), b[1], w1);
        long lo, hi;
        range(w, b[2], lo, hi);
        for (long c3 = lo; c3 <= hi; ++c3) emit(detail::axpy(static_cast<double>(c3), b[2], w));
      }
    }
  }
}

/// lambda_1 ... lambda_d
inline std::vector<double> successive_minima(const BravaisLattice& lat)
{
  const BravaisLattice L = lat.reduced();
  double R = 0.0;
  for (const auto& b : L.basis) R = std::max(R, std::sqrt(detail::dot3(b, b)));
  std::vector<std::pair<double, Vec3>> vs;
  for_each_lattice_vector(L, R * (1.0 + 1e-9), [&](const Vec3& v, double r2) { vs.emplace_back(r2, v); });
  std::sort(vs.begin(), vs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Vec3> chosen;
  std::vector<double> mins;
  for (const auto& [r2, v] : vs) {
    if (static_cast<int>(chosen.size()) == L.dimension) break;
    auto trial = chosen;
    trial.push_back(v);
    double scale = 1.0;
    for (const auto& t : trial) scale *= detail::dot3(t, t);
    if (detail::gram_det(trial) > 1e-10 * scale) {
      chosen = std::move(trial);
      mins.push_back(std::sqrt(r2));
    }
  }
  return mins;
}

inline double shortest_vector(const BravaisLattice& lat) { return successive_minima(lat).front(); }

/// Upper bound on the covering radius, 1/2 sqrt(sum lambda_i^2). Basis independent.
inline double covering_radius_bound(const BravaisLattice& lat)
{
  double s = 0.0;
  for (double m : successive_minima(lat)) s += m * m;
  return 0.5 * std::sqrt(s);
}

/// "square", "triangular" (alias "hexagonal"), "cubic", "bcc", "fcc"; unit cell volume
inline BravaisLattice named_lattice(const std::string& name)
{
  BravaisLattice L;
  if (name == "square") {
    L = BravaisLattice::from_rows({{1.0, 0.0}, {0.0, 1.0}});
  } else if (name == "triangular" || name == "hexagonal") {
    L = BravaisLattice::from_rows({{1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}}).normalized();
  } else if (name == "cubic") {
    L = BravaisLattice::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  } else if (name == "bcc") {
    L = BravaisLattice::from_rows({{-0.5, 0.5, 0.5}, {0.5, -0.5, 0.5}, {0.5, 0.5, -0.5}}).normalized();
  } else if (name == "fcc") {
    L = BravaisLattice::from_rows({{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}}).normalized();
  } else {
    throw ParameterError("unknown lattice '" + name + "'");
  }
  L.name = name == "hexagonal" ? "triangular" : name;
  return L;
}

// ---------------------------------------------------------------- lattice sums

struct LatticeSum {
  double value = 0.0;
  double tail_bound = 0.0;  // certified |exact - value|
  double radius = 0.0;      // vectors with |e| <= radius summed directly
  long long points = 0;
};

namespace detail {

/// sum_{|e|>R} |e|^{-s} ~ (1/|L|) int_{|x|>R} |x|^{-s}, with a bound from
/// Voronoi cells of radius <= mu: a second-order term per cell plus the shell
/// R - mu < |x| < R + mu where cells and the ball boundary disagree.
struct PowerTail {
  double value = 0.0;
  double bound = std::numeric_limits<double>::infinity();
};

inline PowerTail power_tail(int d, double vol, double mu, double s, double R)
{
  PowerTail t;
  const double sigma = sphere_area(d);
  t.value = sigma * std::pow(R, d - s) / ((s - d) * vol);
  if (!(R > 3.0 * mu)) return t;
  double kappa = std::pow((R - mu) / (R - 3.0 * mu), d - 1);
  double curv = sigma / vol * 0.5 * s * (s + 1.0) * mu * mu * kappa * std::pow(R - 3.0 * mu, d - s - 2.0)
                / (s + 2.0 - d);
  double shell = sigma / vol * (std::pow(R - mu, d - s) - std::pow(R + mu, d - s)) / (s - d);
  t.bound = curv + shell;
  return t;
}

/// smallest R (up to the point budget) with power_tail(...).bound <= tol
inline double tail_radius(int d, double vol, double mu, double s, double tol, double max_points)
{
  double r_cap = std::pow(max_points * vol / ball_volume(d), 1.0 / d);
  double lo = 4.0 * mu;
  if (power_tail(d, vol, mu, s, lo).bound <= tol) return lo;
  double hi = lo;
  while (power_tail(d, vol, mu, s, hi).bound > tol) {
    hi *= 2.0;
    if (hi >= r_cap) return std::max(r_cap, lo);
  }
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (power_tail(d, vol, mu, s, mid).bound <= tol ? hi : lo) = mid;
  }
  return hi;
}

} // namespace detail

/// Epstein zeta sum_{e != 0} |e|^{-s}, truncated where the certified tail bound
/// drops below tol (or the point budget runs out; check tail_bound).
inline LatticeSum lattice_zeta(const BravaisLattice& lat, double s, double tol = 1e-6, double max_points = 5e7)
{
  lat.validate();
  const int d = lat.dimension;
  if (!(s > d)) throw DivergenceError("lattice_zeta: s must exceed the dimension");
  if (!(tol > 0.0)) throw ParameterError("lattice_zeta: tol must be > 0");
  const double vol = lat.volume(), mu = covering_radius_bound(lat);
  LatticeSum res;
  res.radius = detail::tail_radius(d, vol, mu, s, tol, max_points);
  NeumaierSum sum;
  const double e = -0.5 * s;
  for_each_lattice_vector(lat, res.radius, [&](const Vec3&, double r2) {
    sum.add(std::pow(r2, e));
    ++res.points;
  });
  auto tail = detail::power_tail(d, vol, mu, s, res.radius);
  res.value = sum.value() + tail.value;
  res.tail_bound = tail.bound;
  return res;
}

// ---------------------------------------------------------------- balls

/// Mean of |x - y|^{-(d+1)} over two disjoint balls of radius rho at distance q.
inline double two_ball_interaction(double rho, double q_dist, int d)
{
  if (!(rho > 0.0) || !(q_dist > 0.0)) throw ParameterError("two_ball_interaction: rho and q must be > 0");
  if (!(rho < 0.5 * q_dist)) throw PreconditionError("two_ball_interaction: need rho < q/2");
  return appell_h(d, rho * rho / (q_dist * q_dist)).value / std::pow(q_dist, d + 1);
}

struct BallLattice {
  BravaisLattice lattice;
  double radius = 0.0;

  double fraction() const { return ball_volume(lattice.dimension) * std::pow(radius, lattice.dimension) / lattice.volume(); }

  void validate() const
  {
    lattice.validate();
    if (!(radius > 0.0)) throw ParameterError("ball radius must be > 0");
    if (!(radius < 0.5 * shortest_vector(lattice)))
      throw PreconditionError("ball radius must be below half the shortest lattice vector");
  }
};

struct BallLatticeEnergy {
  double value = 0.0;
  double self_energy = 0.0;
  double interaction = 0.0;
  double error = 0.0;  // certified bound from the truncated lattice sums
  double fraction = 0.0;
};

/// Self-energy of one ball of radius rho in R^d.
inline double ball_self_energy(double rho, int d)
{
  const double hh = 0.5 * harmonic_number(0.5 * (d - 1));
  return -ball_volume(d - 1) * (std::log(2.0 * rho) + 1.0 - hh) * sphere_area(d) * std::pow(rho, d - 1);
}

namespace detail {

/// zeta(lat, d+1) is passed in so that scans over the scale can reuse it.
inline BallLatticeEnergy ball_lattice_energy_with(const BallLattice& b, const LatticeSum& zeta, double tol)
{
  const int d = b.lattice.dimension;
  const double vol = b.lattice.volume(), rho = b.radius;
  const double mu = covering_radius_bound(b.lattice);
  const double rho2 = rho * rho;
  const double s2 = d + 3.0;
  // (H(t) - 1)/t increases in t, so the tail of sum (H - 1)|q|^{-(d+1)} is at most
  // rho^2 (H(t_R) - 1)/t_R times the |q|^{-(d+3)} tail
  const double lam1 = shortest_vector(b.lattice);
  double R = std::max(4.0 * mu, 2.0 * lam1);
  double slope = 0.0;
  detail::PowerTail tail;
  for (int it = 0; it < 60; ++it) {
    double tR = rho2 / (R * R);
    slope = (appell_h(d, tR).value - 1.0) / tR;
    tail = detail::power_tail(d, vol, mu, s2, R);
    if (rho2 * slope * (tail.value + tail.bound) <= tol * zeta.value) break;
    R *= 1.5;
  }
  NeumaierSum hsum;
  for_each_lattice_vector(b.lattice, R, [&](const Vec3&, double r2) {
    double hm1 = appell_h(d, rho2 / r2).value - 1.0;
    hsum.add(hm1 * std::pow(r2, -0.5 * (d + 1)));
  });
  double htail_hi = rho2 * slope * (tail.value + tail.bound);
  double sum = zeta.value + hsum.value() + 0.5 * htail_hi;
  double sum_err = zeta.tail_bound + 0.5 * htail_hi;

  BallLatticeEnergy e;
  const double bvol = ball_volume(d) * std::pow(rho, d);
  e.fraction = bvol / vol;
  e.self_energy = ball_self_energy(rho, d) / vol;
  e.interaction = sum / vol * bvol * bvol;
  e.error = sum_err / vol * bvol * bvol;
  e.value = e.self_energy + e.interaction;
  return e;
}

} // namespace detail

/// Energy per unit volume of balls centred on a Bravais lattice, K = r^{-d}.
inline BallLatticeEnergy ball_lattice_energy(const BallLattice& b, double tol = 1e-7)
{
  b.validate();
  BravaisLattice unit = b.lattice.normalized();
  double a = std::pow(b.lattice.volume(), 1.0 / b.lattice.dimension);
  double s = b.lattice.dimension + 1.0;
  LatticeSum z = lattice_zeta(unit, s, tol);
  z.value *= std::pow(a, -s);
  z.tail_bound *= std::pow(a, -s);
  return detail::ball_lattice_energy_with(b, z, tol);
}

/// largest fraction with rho < half the shortest vector
inline double max_ball_fraction(const BravaisLattice& lat)
{
  const int d = lat.dimension;
  return ball_volume(d) * std::pow(0.5 * shortest_vector(lat), d) / lat.volume();
}

struct OptimalBallLattice {
  double radius = 0.0;
  double energy = 0.0;
  double scale = 0.0;  // lattice = scale * unit-volume lattice
  BallLatticeEnergy detail;
};

/// zeta(shape.normalized(), d+1) for reuse across calls with the same shape
inline LatticeSum ball_lattice_zeta(const BravaisLattice& shape, double tol = 1e-7)
{
  return lattice_zeta(shape.normalized(), shape.dimension + 1.0, tol);
}

/// Minimizes the ball-lattice energy over the lattice scale at fixed fraction.
inline OptimalBallLattice optimal_ball_lattice(double lambda, const BravaisLattice& shape, int d, double tol = 1e-7,
                                               const std::optional<LatticeSum>& zeta = std::nullopt)
{
  shape.validate();
  if (shape.dimension != d) throw ParameterError("optimal_ball_lattice: lattice dimension mismatch");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("optimal_ball_lattice: lambda must lie in (0,1)");
  const BravaisLattice unit = shape.normalized();
  const double lam0 = max_ball_fraction(unit);
  if (!(lambda < lam0)) throw InfeasibleError("optimal_ball_lattice: fraction exceeds the admissible packing");
  const double s = d + 1.0;
  const LatticeSum z0 = zeta ? *zeta : lattice_zeta(unit, s, tol);
  const double rho_per_a = std::pow(lambda / ball_volume(d), 1.0 / d);
  // rho < lambda_1 a / 2 always holds at fixed lambda < lam0
  auto energy_at = [&](double log_a) {
    double a = std::exp(log_a);
    BallLattice b{unit.scaled(a), rho_per_a * a};
    LatticeSum z = z0;
    z.value *= std::pow(a, -s);
    z.tail_bound *= std::pow(a, -s);
    return detail::ball_lattice_energy_with(b, z, tol);
  };
  const double hh = 0.5 * harmonic_number(0.5 * (d - 1));
  const double a_star = 0.5 * std::exp(hh) / rho_per_a;
  double lo = std::log(a_star) - 4.0, hi = std::log(a_star) + 4.0;
  auto [x, fx] = boost::math::tools::brent_find_minima([&](double la) { return energy_at(la).value; }, lo, hi, 40);
  (void)fx;
  OptimalBallLattice out;
  out.scale = std::exp(x);
  out.radius = rho_per_a * out.scale;
  out.detail = energy_at(x);
  out.energy = out.detail.value;
  return out;
}

// ---------------------------------------------------------------- phases

enum class Phase { Stripes, Balls };

inline std::string phase_name(Phase p) { return p == Phase::Stripes ? "stripes" : "balls"; }

struct PhaseCandidate {
  std::string lattice;
  bool feasible = false;
  double energy = std::numeric_limits<double>::infinity();
  double radius = 0.0;
};

struct PhaseVerdict {
  Phase phase = Phase::Stripes;
  std::string lattice;      // winning lattice for Phase::Balls
  double stripe_energy = 0.0;
  double best_energy = 0.0;
  double margin = std::numeric_limits<double>::infinity();  // |stripes - best balls|
  std::vector<PhaseCandidate> candidates;
};

/// `zetas`, if given, holds ball_lattice_zeta of each lattice
inline PhaseVerdict compare_phases(double lambda, const std::vector<BravaisLattice>& lattices, int d,
                                   const std::vector<LatticeSum>& zetas = {})
{
  if (!zetas.empty() && zetas.size() != lattices.size())
    throw ParameterError("compare_phases: one zeta per lattice expected");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("compare_phases: lambda must lie in (0,1)");
  PhaseVerdict v;
  v.stripe_energy = optimal_stripe(lambda, d).energy;
  double best_ball = std::numeric_limits<double>::infinity();
  double best = v.stripe_energy;
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    const auto& L = lattices[i];
    PhaseCandidate c;
    c.lattice = L.name;
    try {
      auto opt = zetas.empty() ? optimal_ball_lattice(lambda, L, d) : optimal_ball_lattice(lambda, L, d, 1e-7, zetas[i]);
      c.feasible = true;
      c.energy = opt.energy;
      c.radius = opt.radius;
      best_ball = std::min(best_ball, c.energy);
      if (c.energy < best) {
        best = c.energy;
        v.phase = Phase::Balls;
        v.lattice = L.name;
      }
    } catch (const InfeasibleError&) {
    }
    v.candidates.push_back(c);
  }
  v.best_energy = best;
  v.margin = std::abs(v.stripe_energy - best_ball);
  return v;
}

} // namespace nlperim

#endif
