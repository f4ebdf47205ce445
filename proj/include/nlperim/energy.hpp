#ifndef NLPERIM_ENERGY_HPP
#define NLPERIM_ENERGY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "autocorr.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "torus.hpp"

namespace nlperim {

struct EnergyReport {
  double value = 0.0;
  double near_field = 0.0;   // r in (0, r0)
  double far_field = 0.0;    // r in (r0, inf)
  double truncation_correction = 0.0;
  double quadrature_error = 0.0;
  Kernel kernel;
  double truncation_radius = 1.0;
  double mesh_radius = 0.0;  // FFT sources: last sampled radius
  bool divergent = false;
  std::string diagnostic;
};

namespace detail {

inline EnergyReport divergent_report(const Kernel& k, double r0, double sign, std::string why)
{
  EnergyReport rep;
  rep.kernel = k;
  rep.truncation_radius = r0;
  rep.divergent = true;
  rep.value = sign * std::numeric_limits<double>::infinity();
  rep.diagnostic = std::move(why);
  return rep;
}

inline void finish(EnergyReport& rep)
{
  rep.value = rep.near_field + rep.far_field + rep.truncation_correction;
  double far = std::abs(rep.far_field);
  if (!rep.divergent && far > 0.0 && std::abs(rep.near_field) > 1e6 * far) {
    rep.divergent = true;
    rep.diagnostic = "near-field partial integral exceeds 1e6 x |far field|";
  }
}

inline EnergyReport energy_analytic(const RadialAutocorrelation& rad, const Kernel& k, double r0)
{
  const auto& p = *rad.profile;
  const int d = rad.dimension;
  const double sigma = sphere_area(d);
  const double c0 = rad.value_at_zero, s = rad.slope_at_zero;
  const double inf = std::numeric_limits<double>::infinity();
  const double cut = k.cutoff();

  if (cut == 0.0 && p.remainder_order > 0 && k.exponent() >= p.remainder_order + d - 1)
    return divergent_report(k, r0, 1.0, "near-field integral diverges: kernel too singular for this autocorrelation");

  EnergyReport rep;
  rep.kernel = k;
  rep.truncation_radius = r0;

  const double R = p.support;
  std::vector<double> pts{0.0, R};
  if (cut > 0.0 && cut < R) pts.push_back(cut);
  if (r0 < R) pts.push_back(r0);
  if (p.affine_radius > 0.0 && p.affine_radius < R) pts.push_back(p.affine_radius);
  for (double b : p.breakpoints)
    if (b > 0.0 && b < R) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const double wexp = d - 2 - k.exponent();
  // v r^wexp without overflow when r is tiny and v is of order r^3
  auto weighted = [&](double v, double r) {
    return std::copysign(std::exp(std::log(std::abs(v)) + wexp * std::log(r)), v);
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    if (b <= cut) continue;
    bool near = b <= r0;
    if (near && b <= p.affine_radius) continue;  // excess vanishes identically
    auto f = [&](double r) {
      if (r <= cut || r <= 0.0) return 0.0;
      double v = near ? p.excess(r) : p.value(r) - c0;
      return v == 0.0 ? 0.0 : weighted(v, r);
    };
    QuadResult q = integrate_ts(f, a, b, 1e-11);
    (near ? rep.near_field : rep.far_field) += sigma * q.value;
    rep.quadrature_error += sigma * q.error;
  }

  // beyond the support c = tail_value
  const double fv = p.tail_value;
  if (R < r0) {
    double m0 = radial_moment(k, d - 2, R, r0), m1 = radial_moment(k, d - 1, R, r0);
    rep.near_field += sigma * ((fv - c0) * m0 - s * m1);
  }
  double mt = radial_moment(k, d - 2, std::max(R, r0), inf);
  if (std::isinf(mt)) {
    if (fv - c0 != 0.0) return divergent_report(k, r0, fv - c0 < 0 ? -1.0 : 1.0, "far-field tail integral diverges");
    mt = 0.0;
  }
  rep.far_field += sigma * (fv - c0) * mt;
  rep.quadrature_error += sigma * p.tail_error * radial_moment(k, d - 2, R, inf);

  rep.truncation_correction = sigma * s * signed_moment(k, d - 1, 1.0, r0);
  finish(rep);
  return rep;
}

/// product integration against the kernel of a linearly interpolated sample set
inline EnergyReport energy_sampled(const std::vector<double>& rr, const std::vector<double>& cc, double c0, double s,
                                   int d, const Kernel& k, double r0)
{
  const double sigma = sphere_area(d);
  const double inf = std::numeric_limits<double>::infinity();
  EnergyReport rep;
  rep.kernel = k;
  rep.truncation_radius = r0;
  if (rr.size() < 2) throw PreconditionError("energy_radial: need at least two radial samples");

  // insert r0 as a node
  std::vector<double> r, c;
  for (std::size_t i = 0; i < rr.size(); ++i) {
    if (i > 0 && rr[i - 1] < r0 && rr[i] > r0) {
      double t = (r0 - rr[i - 1]) / (rr[i] - rr[i - 1]);
      r.push_back(r0);
      c.push_back(cc[i - 1] + t * (cc[i] - cc[i - 1]));
    }
    r.push_back(rr[i]);
    c.push_back(cc[i]);
  }

  // first interval: cubic remainder fitted at r1 (zero if c is affine there)
  const double r1 = r[1];  // r1 <= r0 since r0 is a node
  {
    double e1 = c[1] - c0 - r1 * s;
    if (e1 != 0.0) {
      double m3 = radial_moment(k, d + 1, 0.0, r1);
      if (std::isinf(m3)) return divergent_report(k, r0, 1.0, "near-field integral diverges at r = 0");
      rep.near_field += sigma * e1 / (r1 * r1 * r1) * m3;
      double m2 = radial_moment(k, d, 0.0, r1);
      double alt = std::isinf(m2) ? 0.0 : sigma * e1 / (r1 * r1) * m2;
      rep.quadrature_error += std::abs(sigma * e1 / (r1 * r1 * r1) * m3 - alt);
    }
  }
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    double a = r[i], b = r[i + 1];
    bool near = b <= r0;
    double fa = c[i] - c0 - (near ? a * s : 0.0);
    double fb = c[i + 1] - c0 - (near ? b * s : 0.0);
    double B = (fb - fa) / (b - a), A = fa - B * a;
    double v = sigma * (A * radial_moment(k, d - 2, a, b) + B * radial_moment(k, d - 1, a, b));
    (near ? rep.near_field : rep.far_field) += v;
  }

  // tail: c = c0^2 beyond the last sample
  const double R = r.back(), fv = c0 * c0;
  if (R < r0) {
    rep.near_field += sigma * ((fv - c0) * radial_moment(k, d - 2, R, r0) - s * radial_moment(k, d - 1, R, r0));
  }
  double mt = radial_moment(k, d - 2, std::max(R, r0), inf);
  if (std::isinf(mt)) {
    if (fv != c0) return divergent_report(k, r0, -1.0, "far-field tail integral diverges");
    mt = 0.0;
  }
  rep.far_field += sigma * (fv - c0) * mt;
  double osc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= 0.5 * R) osc = std::max(osc, std::abs(c[i] - fv));
  double mtail = radial_moment(k, d - 2, R, inf);
  if (std::isfinite(mtail)) rep.quadrature_error += sigma * osc * mtail;

  rep.truncation_correction = sigma * s * signed_moment(k, d - 1, 1.0, r0);
  rep.mesh_radius = R;
  finish(rep);
  return rep;
}

} // namespace detail

/// E_eps(u) = sigma_{d-1} int_0^inf (c(r) - c(0) - r c'(0) chi_(0,r0)) K(r) r^{d-2} dr
///            + sigma_{d-1} c'(0) int_1^{r0} K r^{d-1} dr
/// r_max <= 0 uses every sample (FFT) or the closed form (analytic).
inline EnergyReport energy_radial(const RadialAutocorrelation& rad, const Kernel& k, double r_max = -1.0,
                                  double r0 = 1.0)
{
  k.validate();
  if (k.dimension != rad.dimension) throw ParameterError("kernel and autocorrelation dimensions differ");
  if (!(r0 > 0.0)) throw DomainError("truncation radius must be > 0");
  if (rad.profile) return detail::energy_analytic(rad, k, r0);
  std::vector<double> r, c;
  for (std::size_t i = 0; i < rad.radii.size(); ++i) {
    if (r_max > 0.0 && rad.radii[i] > r_max * (1 + 1e-12)) break;
    if (i > 0 && rad.radii[i] < rad.near_fit_radius * (1 - 1e-12) && i + 2 < rad.radii.size()) continue;
    r.push_back(rad.radii[i]);
    c.push_back(rad.values[i]);
  }
  auto rep = detail::energy_sampled(r, c, rad.value_at_zero, rad.slope_at_zero, rad.dimension, k, r0);
  if (rep.divergent) return rep;
  // interpolation error from the same rule on every other sample
  if (r.size() > 8) {
    std::vector<double> r2{r[0]}, c2{c[0]};
    r2.push_back(r[1]);
    c2.push_back(c[1]);
    for (std::size_t i = 3; i < r.size(); i += 2) {
      r2.push_back(r[i]);
      c2.push_back(c[i]);
    }
    if (r2.back() != r.back()) {
      r2.push_back(r.back());
      c2.push_back(c.back());
    }
    auto coarse = detail::energy_sampled(r2, c2, rad.value_at_zero, rad.slope_at_zero, rad.dimension, k, r0);
    if (!coarse.divergent) rep.quadrature_error += std::abs(coarse.value - rep.value) / 3.0;
  }
  return rep;
}

/// Re-evaluates with truncation radius r0; the total value is unchanged.
inline EnergyReport truncation_shift(const RadialAutocorrelation& rad, const Kernel& k, double r0, double r_max = -1.0)
{
  return energy_radial(rad, k, r_max, r0);
}

// ---- pair weights on the grid -------------------------------------------------

/// W(k) = int tent_k(w) K(|w|)/|w| dw summed over periodic images with |kh| <= R,
/// where tent_k is the multilinear hat on cell offset k. For a rasterized set the
/// continuous autocorrelation is exactly sum_k C(k) tent_k.
struct PairWeights {
  int dimension = 2;
  int n = 1;
  double ell = 1.0;
  double image_radius = 0.0;
  std::vector<double> periodized;  // torus-indexed, entry 0 excludes the origin offset
  double tail = 0.0;               // int_{|w|>R} K/|w| dw
};

namespace detail {

struct TentRule {
  std::vector<double> t, w;  // 1-d nodes on [-1,1] with hat weight folded in
};

inline TentRule tent_rule(int pieces)
{
  TentRule r;
  const auto base = gauss_rule<4>(0.0, 1.0);
  for (int side : {-1, 1})
    for (int j = 0; j < pieces; ++j) {
      double a = double(j) / pieces, b = double(j + 1) / pieces;
      for (auto [x, w] : base) {
        double u = a + (b - a) * x;
        r.t.push_back(side * u);
        r.w.push_back((b - a) * w * (1.0 - u));
      }
    }
  return r;
}

/// int over [-1,1]^d of prod(1-|t_i|) f(h |k + t|) dt
inline double tent_integral(const Kernel& ker, const std::array<long, 3>& k, int d, double h, const TentRule& rule)
{
  const double sexp = ker.exponent(), cut = ker.cutoff();
  auto f = [&](double r) { return r <= cut || r == 0.0 ? 0.0 : std::pow(r, -sexp - 1.0); };
  const std::size_t m = rule.t.size();
  double s = 0.0;
  if (d == 1) {
    for (std::size_t i = 0; i < m; ++i) s += rule.w[i] * f(h * std::abs(k[0] + rule.t[i]));
  } else if (d == 2) {
    for (std::size_t i = 0; i < m; ++i) {
      double x = k[0] + rule.t[i];
      for (std::size_t j = 0; j < m; ++j) {
        double y = k[1] + rule.t[j];
        s += rule.w[i] * rule.w[j] * f(h * std::sqrt(x * x + y * y));
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      double x = k[0] + rule.t[i];
      for (std::size_t j = 0; j < m; ++j) {
        double y = k[1] + rule.t[j];
        for (std::size_t l = 0; l < m; ++l) {
          double z = k[2] + rule.t[l];
          s += rule.w[i] * rule.w[j] * rule.w[l] * f(h * std::sqrt(x * x + y * y + z * z));
        }
      }
    }
  }
  return s * std::pow(h, d);
}

} // namespace detail

inline PairWeights pair_weights(int d, int n, double ell, const Kernel& ker, double image_radius = -1.0)
{
  ker.validate();
  if (ker.dimension != d) throw ParameterError("kernel dimension does not match the torus");
  PairWeights pw;
  pw.dimension = d;
  pw.n = n;
  pw.ell = ell;
  const double h = ell / n;
  if (image_radius <= 0.0) image_radius = 2.0 * ell;
  pw.image_radius = image_radius;
  const long K = static_cast<long>(std::floor(image_radius / h));
  std::size_t N = 1;
  for (int i = 0; i < d; ++i) N *= static_cast<std::size_t>(n);
  pw.periodized.assign(N, 0.0);
  const auto fine = detail::tent_rule(d == 3 ? 4 : 8);
  const auto mid = detail::tent_rule(1);
  const double sexp = ker.exponent(), cut = ker.cutoff();
  const double inf = std::numeric_limits<double>::infinity();
  std::array<long, 3> k{0, 0, 0};
  for (k[0] = -K; k[0] <= K; ++k[0])
    for (k[1] = (d > 1 ? -K : 0); k[1] <= (d > 1 ? K : 0); ++k[1])
      for (k[2] = (d > 2 ? -K : 0); k[2] <= (d > 2 ? K : 0); ++k[2]) {
        long k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0) continue;
        double rr = h * std::sqrt(double(k2));
        if (rr > image_radius) continue;
        long kmax = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
        double w;
        if (kmax <= 1 && cut == 0.0) {
          int touching = 0;
          for (int i = 0; i < d; ++i) touching += std::abs(k[i]) == 1;
          w = (sexp + 1.0 - touching < d) ? detail::tent_integral(ker, k, d, h, fine) : inf;
        } else if (kmax <= 2 || (cut > 0.0 && rr < cut + 2.0 * h * std::sqrt(double(d)))) {
          w = detail::tent_integral(ker, k, d, h, fine);
        } else if (kmax <= 12) {
          w = detail::tent_integral(ker, k, d, h, mid);
        } else {
          w = std::pow(h, d) * std::pow(rr, -sexp - 1.0);
        }
        pw.periodized[detail::wrap_index(k, d, n)] += w;
      }
  pw.tail = sphere_area(d) * radial_moment(ker, d - 2, image_radius, inf);
  return pw;
}

/// I = E(u1 + u2) - E(u1) - E(u2) = 2 int X(z) K(|z|)/|z| dz, X the cross-correlation
inline double interaction_energy(const TorusConfig& u1, const TorusConfig& u2, const Kernel& k,
                                 double image_radius = -1.0)
{
  if (u1.dimension() != u2.dimension() || u1.cells_per_side() != u2.cells_per_side() ||
      u1.side_length() != u2.side_length())
    throw PreconditionError("interaction_energy: configurations live on different tori");
  for (std::size_t i = 0; i < u1.cell_count(); ++i)
    if (u1.occupied(i) && u2.occupied(i)) throw PreconditionError("interaction_energy: supports overlap");
  if (u1.occupied_count() == 0 || u2.occupied_count() == 0) return 0.0;
  auto X = correlation_counts(u1, u2);
  auto pw = pair_weights(u1.dimension(), u1.cells_per_side(), u1.side_length(), k, image_radius);
  const double N = static_cast<double>(u1.cell_count());
  NeumaierSum s;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i] == 0) continue;
    if (std::isinf(pw.periodized[i])) return std::numeric_limits<double>::infinity();
    s.add(X[i] / N * pw.periodized[i]);
  }
  s.add(u1.volume_fraction() * u2.volume_fraction() * pw.tail);
  return 2.0 * s.value();
}

// ---- bounds -------------------------------------------------------------------

struct BoundCheck {
  double lhs = 0.0;  // energy (lower bound) or perimeter side (BV bound)
  double rhs = 0.0;
  bool ok = false;
};

/// energy >= -sigma_{d-1} lambda int_1^inf K r^{d-2} dr
inline BoundCheck lower_bound_check(const RadialAutocorrelation& rad, const Kernel& k)
{
  const double inf = std::numeric_limits<double>::infinity();
  BoundCheck b;
  auto rep = energy_radial(rad, k);
  b.lhs = rep.value;
  b.rhs = -sphere_area(rad.dimension) * rad.value_at_zero * radial_moment(k, rad.dimension - 2, 1.0, inf);
  b.ok = rep.value >= b.rhs - rep.quadrature_error - 1e-12;
  return b;
}

/// 2 (-c'(0)) int_A K r^{d-1} <= E/sigma + lambda int_{1/2}^inf K r^{d-2}, A = (1/2, 1)
inline BoundCheck bv_bound_check(const RadialAutocorrelation& rad, const Kernel& k)
{
  if (k.family != KernelFamily::PowerCutoff) throw ParameterError("bv_bound_check needs the power-cutoff family");
  if (!(k.epsilon < 0.5)) throw PreconditionError("bv_bound_check needs eps < 1/2");
  const int d = rad.dimension;
  const double inf = std::numeric_limits<double>::infinity();
  auto rep = energy_radial(rad, k);
  double C0 = radial_moment(k, d - 1, 0.5, 1.0);
  double C1 = radial_moment(k, d - 2, 0.5, inf);
  BoundCheck b;
  b.lhs = 2.0 * (-rad.slope_at_zero) * C0;
  b.rhs = rep.value / sphere_area(d) + C1 * rad.value_at_zero;
  b.ok = b.lhs <= b.rhs + rep.quadrature_error / sphere_area(d) + 1e-12;
  return b;
}

inline BoundCheck bv_bound_check(const TorusConfig& cfg, const Kernel& k)
{
  return bv_bound_check(autocorrelation_fft(cfg).radial, k);
}

// ---- experiment drivers -------------------------------------------------------

struct SweepPoint {
  double epsilon = 0.0;
  EnergyReport report;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  EnergyReport limit;                                  // eps = 0
  double rate = std::numeric_limits<double>::quiet_NaN();  // log-log slope of E_0 - E_eps
};

inline void check_eps_list(const std::vector<double>& eps)
{
  if (eps.empty()) throw ParameterError("epsilon list is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw ParameterError("epsilon values must be > 0");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw ParameterError("epsilon list must be decreasing");
  }
}

/// least-squares slope of log y against log x
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline SweepResult epsilon_sweep(const RadialAutocorrelation& rad, const Kernel& family, const std::vector<double>& eps)
{
  check_eps_list(eps);
  SweepResult res;
  res.limit = energy_radial(rad, family.limit());
  std::vector<double> xs, gaps;
  bool fit = !res.limit.divergent;
  for (double e : eps) {
    auto rep = energy_radial(rad, family.with_epsilon(e));
    double gap = res.limit.value - rep.value;
    if (!(gap > 10.0 * (rep.quadrature_error + res.limit.quadrature_error))) fit = false;
    xs.push_back(e);
    gaps.push_back(gap);
    res.points.push_back({e, rep});
  }
  if (fit && xs.size() >= 2) res.rate = loglog_slope(xs, gaps);
  return res;
}

struct DavilaPoint {
  double epsilon = 0.0;
  double ratio = 0.0;
};

struct DavilaResult {
  std::vector<DavilaPoint> points;
  double limit = 0.0;  // ||grad u|| / |T|
};

/// ratio(eps) = (sigma/M_eps) int (c(0) - c(r)) K_eps r^{d-2} dr = limit - E_eps / M_eps
inline DavilaResult davila_limit(const RadialAutocorrelation& rad, const Kernel& family, const std::vector<double>& eps)
{
  check_eps_list(eps);
  const int d = rad.dimension;
  DavilaResult res;
  res.limit = -rad.slope_at_zero * sphere_area(d) / ball_volume(d - 1);
  for (double e : eps) {
    Kernel k = family.with_epsilon(e);
    double M = mollifier_mass(k);
    auto rep = energy_radial(rad, k);
    if (rep.divergent) throw DivergenceError("davila_limit: energy diverges at eps = " + std::to_string(e));
    double ratio = M > 0.0 ? res.limit - rep.value / M : 0.0;
    res.points.push_back({e, ratio});
  }
  return res;
}

struct PartialSum {
  long N = 0;
  double energy_sum = 0.0;  // sum_{k=2}^N (-ln r_k) r_k
  double bv_sum = 0.0;      // sum_{k=2}^N r_k
};

/// r_k = 1/(k ln^2 k)
inline std::vector<PartialSum> divergence_partial_sums(const std::vector<long>& Ns)
{
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 2) throw ParameterError("partial sums need N >= 2");
    if (i > 0 && Ns[i] <= Ns[i - 1]) throw ParameterError("N list must be increasing");
  }
  std::vector<PartialSum> out;
  NeumaierSum se, sb;
  long k = 2;
  for (long N : Ns) {
    for (; k <= N; ++k) {
      double lk = std::log(double(k));
      double r = 1.0 / (k * lk * lk);
      se.add(-std::log(r) * r);
      sb.add(r);
    }
    out.push_back({N, se.value(), sb.value()});
  }
  return out;
}

} // namespace nlperim

#endif
