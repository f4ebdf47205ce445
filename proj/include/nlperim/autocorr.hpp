#ifndef NLPERIM_AUTOCORR_HPP
#define NLPERIM_AUTOCORR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "constants.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "quadrature.hpp"
#include "torus.hpp"

namespace nlperim {

/// Periodic stripes: occupied width d0, gap d1, period a = d0 + d1.
struct StripePattern {
  int dimension = 2;
  double d0 = 0.5;
  double d1 = 0.5;

  double period() const { return d0 + d1; }
  double fraction() const { return d0 / (d0 + d1); }
  void validate() const
  {
    if (dimension < 1 || dimension > 3) throw ParameterError("stripe dimension must be 1, 2 or 3");
    if (!(d0 > 0.0) || !(d1 > 0.0) || !std::isfinite(d0 + d1))
      throw ParameterError("stripe widths must be > 0");
  }
};

enum class AutocorrSource { FFT, AnalyticBall, AnalyticStripe };

inline std::string source_name(AutocorrSource s)
{
  switch (s) {
    case AutocorrSource::FFT: return "fft";
    case AutocorrSource::AnalyticBall: return "analytic_ball";
    case AutocorrSource::AnalyticStripe: return "analytic_stripe";
  }
  return "?";
}

/// Closed-form c_u. Beyond `support` c_u is replaced by `tail_value`,
/// with |c_u - tail_value| <= tail_error there.
struct AnalyticProfile {
  std::function<double(double)> value;
  std::function<double(double)> excess;  // c(r) - c(0) - r c'(0)
  std::vector<double> breakpoints;       // non-smooth radii in (0, support)
  double support = 0.0;
  double tail_value = 0.0;
  double tail_error = 0.0;
  double affine_radius = 0.0;            // excess == 0 on [0, affine_radius]
  int remainder_order = 3;               // excess ~ r^m near 0; 0 if identically zero
};

struct RadialAutocorrelation {
  int dimension = 2;
  double torus_volume = 1.0;
  std::vector<double> radii;
  std::vector<double> values;
  double value_at_zero = 0.0;
  double slope_at_zero = 0.0;
  AutocorrSource source = AutocorrSource::FFT;
  std::optional<AnalyticProfile> profile;
  bool slope_reliable = true;
  double near_fit_radius = 0.0;  // sampled sources: cubic remainder model below this radius

  double fraction() const { return value_at_zero; }

  /// c_u(r): closed form if available, else linear interpolation of the samples
  double operator()(double r) const
  {
    if (profile) return r >= profile->support ? profile->tail_value : profile->value(r);
    if (radii.empty()) return value_at_zero;
    if (r >= radii.back()) return values.back();
    auto it = std::upper_bound(radii.begin(), radii.end(), r);
    std::size_t j = static_cast<std::size_t>(it - radii.begin());
    if (j == 0) return values.front();
    double t = (r - radii[j - 1]) / (radii[j] - radii[j - 1]);
    return values[j - 1] + t * (values[j] - values[j - 1]);
  }
};

/// C_u on all grid shifts, C(k) = (1/N) sum_x u(x) u(x+k)
struct GridAutocorrelation {
  int dimension = 2;
  int n = 1;
  double ell = 1.0;
  std::vector<double> values;
  std::vector<std::int64_t> counts;
};

// ---- FFT path ---------------------------------------------------------------

/// exact integer correlation counts sum_x a(x) b(x+k)
inline std::vector<std::int64_t> correlation_counts(const TorusConfig& a, const TorusConfig& b)
{
  if (a.dimension() != b.dimension() || a.cells_per_side() != b.cells_per_side())
    throw ConfigurationError("correlation of configs on different grids");
  RealFft fft(a.dimension(), a.cells_per_side());
  auto va = a.as_doubles();
  auto r = (&a == &b) ? fft.correlate(va, va) : fft.correlate(va, b.as_doubles());
  std::vector<std::int64_t> c(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) c[i] = std::llround(r[i]);
  return c;
}

inline GridAutocorrelation grid_autocorrelation(const TorusConfig& cfg)
{
  GridAutocorrelation g;
  g.dimension = cfg.dimension();
  g.n = cfg.cells_per_side();
  g.ell = cfg.side_length();
  g.counts = correlation_counts(cfg, cfg);
  g.values.resize(g.counts.size());
  const double inv = 1.0 / static_cast<double>(cfg.cell_count());
  for (std::size_t i = 0; i < g.counts.size(); ++i) g.values[i] = g.counts[i] * inv;
  return g;
}

namespace detail {

inline std::size_t wrap_index(const std::array<long, 3>& k, int d, int n)
{
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) idx = idx * n + static_cast<std::size_t>(((k[i] % n) + n) % n);
  return idx;
}

} // namespace detail

/// multilinear interpolant of the grid values at z (cell units); for a rasterized
/// set this is its exact continuous autocorrelation
inline double interpolate_autocorrelation(const GridAutocorrelation& g, const std::array<double, 3>& z)
{
  const int d = g.dimension, n = g.n;
  std::array<long, 3> base{0, 0, 0};
  std::array<double, 3> t{0.0, 0.0, 0.0};
  for (int i = 0; i < d; ++i) {
    double f = std::floor(z[i]);
    base[i] = static_cast<long>(f);
    t[i] = z[i] - f;
  }
  double s = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    std::array<long, 3> k = base;
    for (int i = 0; i < d; ++i) {
      int bit = (corner >> i) & 1;
      w *= bit ? t[i] : 1.0 - t[i];
      k[i] += bit;
    }
    if (w != 0.0) s += w * g.values[detail::wrap_index(k, d, n)];
  }
  return s;
}

struct SlopeEstimate {
  double slope = 0.0;
  bool reliable = true;
};

namespace detail {

inline long gcd3(long a, long b, long c) { return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)); }

/// equal-area weights of unit directions: fraction of a dense Fibonacci point set
/// nearest to each direction (d = 3), angular gap halves (d = 2)
inline std::vector<double> direction_weights_raw(const std::vector<std::array<double, 3>>& u, int d)
{
  std::vector<double> w(u.size(), 0.0);
  if (d == 1) {
    std::fill(w.begin(), w.end(), 1.0 / u.size());
    return w;
  }
  if (d == 2) {
    std::vector<std::pair<double, std::size_t>> ang;
    for (std::size_t i = 0; i < u.size(); ++i) ang.push_back({std::atan2(u[i][1], u[i][0]), i});
    std::sort(ang.begin(), ang.end());
    const std::size_t m = ang.size();
    for (std::size_t i = 0; i < m; ++i) {
      double gp = ang[i].first - ang[(i + m - 1) % m].first;
      double gn = ang[(i + 1) % m].first - ang[i].first;
      if (gp <= 0.0) gp += 2.0 * pi;
      if (gn <= 0.0) gn += 2.0 * pi;
      w[ang[i].second] = 0.25 * (gp + gn) / pi;
    }
    return w;
  }
  const int P = 40000;
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < P; ++i) {
    double zc = 1.0 - (i + 0.5) * 2.0 / P;
    double rr = std::sqrt(1.0 - zc * zc), ph = golden * i;
    std::array<double, 3> p{rr * std::cos(ph), rr * std::sin(ph), zc};
    std::size_t best = 0;
    double bd = -2.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      double dot = p[0] * u[j][0] + p[1] * u[j][1] + p[2] * u[j][2];
      if (dot > bd) {
        bd = dot;
        best = j;
      }
    }
    w[best] += 1.0 / P;
  }
  return w;
}

/// Least-norm change of w making sum_i w_i f(u_i) exact for f = 1 and f = |u.nu|
/// with nu along the axes (and the diagonals for d = 2), i.e. exact slopes for
/// flat grid-aligned interfaces.
inline void match_moments(std::vector<double>& w, const std::vector<std::array<double, 3>>& u, int d)
{
  std::vector<std::array<double, 3>> normals;
  for (int a = 0; a < d; ++a) {
    std::array<double, 3> e{0.0, 0.0, 0.0};
    e[a] = 1.0;
    normals.push_back(e);
  }
  if (d == 2) {
    const double r = std::sqrt(0.5);
    normals.push_back({r, r, 0.0});
    normals.push_back({r, -r, 0.0});
  }
  // mean of |u.nu| over the sphere: 2/pi (d = 2), 1/2 (d = 3)
  const double mean_abs = d == 2 ? 2.0 / pi : 0.5;
  const std::size_t m = normals.size() + 1, N = u.size();
  if (N < m) return;
  std::vector<std::vector<double>> A(m, std::vector<double>(N));
  std::vector<double> b(m, mean_abs);
  b[0] = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    A[0][i] = 1.0;
    for (std::size_t j = 0; j < normals.size(); ++j)
      A[j + 1][i] = std::abs(u[i][0] * normals[j][0] + u[i][1] * normals[j][1] + u[i][2] * normals[j][2]);
  }
  // (A A^T) lambda = b - A w, w += A^T lambda
  std::vector<std::vector<double>> G(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t i = 0; i < N; ++i) G[p][q] += A[p][i] * A[q][i];
    double aw = 0.0;
    for (std::size_t i = 0; i < N; ++i) aw += A[p][i] * w[i];
    G[p][m] = b[p] - aw;
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(G[r][c]) > std::abs(G[piv][c])) piv = r;
    std::swap(G[c], G[piv]);
    if (std::abs(G[c][c]) < 1e-14) return;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      double f = G[r][c] / G[c][c];
      for (std::size_t k = c; k <= m; ++k) G[r][k] -= f * G[c][k];
    }
  }
  std::vector<double> w2 = w;
  for (std::size_t p = 0; p < m; ++p) {
    double lam = G[p][m] / G[p][p];
    for (std::size_t i = 0; i < N; ++i) w2[i] += lam * A[p][i];
  }
  if (std::all_of(w2.begin(), w2.end(), [](double x) { return x > 0.0; })) w = std::move(w2);
}

/// equal-area weights of unit directions: fraction of a dense Fibonacci point set
/// nearest to each direction (d = 3), angular gap halves (d = 2); then moment matched
inline std::vector<double> direction_weights(const std::vector<std::array<double, 3>>& u, int d)
{
  auto w = direction_weights_raw(u, d);
  if (d > 1) match_moments(w, u, d);
  return w;
}

} // namespace detail

/// Linear functional sum_j coeff_j C(index_j) approximating -c'(0): the spherical
/// mean of directional difference quotients (C(0) - C(k))/|k h| along primitive
/// lattice directions, Richardson-extrapolated from k and 2k. Lattice shifts see
/// the macroscopic boundary, not the staircase.
struct SlopeStencil {
  std::vector<std::size_t> index;
  std::vector<double> coeff;
};

inline SlopeStencil slope_stencil(int d, int n, double ell, int kmax = -1)
{
  const double h = ell / n;
  if (kmax <= 0) kmax = std::clamp(n / 32, d == 3 ? 2 : 1, d == 3 ? 3 : 8);
  kmax = std::min(kmax, std::max(1, n / 4));
  std::vector<std::array<double, 3>> dirs;
  std::vector<std::array<std::size_t, 2>> idx;
  std::vector<double> len;
  std::array<long, 3> k{0, 0, 0};
  const long K = kmax;
  for (k[0] = -K; k[0] <= K; ++k[0])
    for (k[1] = (d > 1 ? -K : 0); k[1] <= (d > 1 ? K : 0); ++k[1])
      for (k[2] = (d > 2 ? -K : 0); k[2] <= (d > 2 ? K : 0); ++k[2]) {
        long k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0 || k2 > K * K || detail::gcd3(k[0], k[1], k[2]) != 1) continue;
        double l = std::sqrt(double(k2));
        std::array<long, 3> k2v{2 * k[0], 2 * k[1], 2 * k[2]};
        dirs.push_back({k[0] / l, k[1] / l, k[2] / l});
        idx.push_back({detail::wrap_index(k, d, n), detail::wrap_index(k2v, d, n)});
        len.push_back(l * h);
      }
  auto w = detail::direction_weights(dirs, d);
  // (4 D1 - D2)/3 with D1 = (C0 - C(k))/L, D2 = (C0 - C(2k))/(2L)
  std::vector<double> acc(static_cast<std::size_t>(std::pow(n, d)), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    double a = w[i] / (3.0 * len[i]);
    acc[0] += a * (4.0 - 0.5);
    acc[idx[i][0]] -= 4.0 * a;
    acc[idx[i][1]] += 0.5 * a;
  }
  SlopeStencil st;
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (acc[i] != 0.0) {
      st.index.push_back(i);
      st.coeff.push_back(acc[i]);
    }
  return st;
}

inline SlopeEstimate estimate_slope(const GridAutocorrelation& g, int kmax = -1)
{
  auto st = slope_stencil(g.dimension, g.n, g.ell, kmax);
  double mean = 0.0;
  for (std::size_t i = 0; i < st.index.size(); ++i) mean += st.coeff[i] * g.values[st.index[i]];
  SlopeEstimate est;
  est.slope = -std::max(0.0, mean);
  return est;
}

/// spherical mean of the interpolated C_u at radius r (cell units)
inline double spherical_mean(const GridAutocorrelation& g, double r)
{
  const int d = g.dimension;
  if (r == 0.0) return g.values[0];
  if (d == 1) return 0.5 * (interpolate_autocorrelation(g, {r, 0, 0}) + interpolate_autocorrelation(g, {-r, 0, 0}));
  if (d == 2) {
    const int M = static_cast<int>(std::clamp(32.0 * r, 64.0, 8192.0));
    double s = 0.0;
    for (int i = 0; i < M; ++i) {
      double t = 2.0 * pi * (i + 0.5) / M;
      s += interpolate_autocorrelation(g, {r * std::cos(t), r * std::sin(t), 0});
    }
    return s / M;
  }
  // d = 3: midpoint in cos(theta), uniform in phi
  const int Mt = static_cast<int>(std::clamp(6.0 * r, 12.0, 512.0));
  const int Mp = 2 * Mt;
  double s = 0.0;
  for (int i = 0; i < Mt; ++i) {
    double ct = -1.0 + (i + 0.5) * 2.0 / Mt, st = std::sqrt(1.0 - ct * ct);
    for (int j = 0; j < Mp; ++j) {
      double ph = 2.0 * pi * (j + 0.5) / Mp;
      s += interpolate_autocorrelation(g, {r * st * std::cos(ph), r * st * std::sin(ph), r * ct});
    }
  }
  return s / (Mt * Mp);
}

/// Radial profile on the shells r_j = j h (j = 0..max_radius/h); each value is the
/// spherical mean of the interpolated grid autocorrelation. Radii beyond ell/2
/// read periodic images.
inline RadialAutocorrelation radial_average(const GridAutocorrelation& g, double max_radius = -1.0)
{
  const int d = g.dimension, n = g.n;
  const double h = g.ell / n;
  if (max_radius <= 0.0) max_radius = 0.5 * g.ell;
  const long K = static_cast<long>(std::floor(max_radius / h + 1e-9));
  RadialAutocorrelation rad;
  rad.dimension = d;
  rad.torus_volume = std::pow(g.ell, d);
  rad.source = AutocorrSource::FFT;
  for (long j = 0; j <= K; ++j) {
    rad.radii.push_back(j * h);
    rad.values.push_back(spherical_mean(g, double(j)));
  }
  rad.value_at_zero = g.values[0];
  auto est = estimate_slope(g);
  rad.slope_at_zero = est.slope;
  bool mono = true;
  for (std::size_t i = 1; i < rad.values.size() && i <= 4; ++i)
    if (rad.values[i] > rad.values[i - 1] + 1e-15) mono = false;
  rad.slope_reliable = mono;
  rad.near_fit_radius = std::min(8.0 * h, 0.25 * max_radius);
  return rad;
}

struct AutocorrResult {
  GridAutocorrelation grid;
  RadialAutocorrelation radial;
};

inline AutocorrResult autocorrelation_fft(const TorusConfig& cfg, double max_radius = -1.0)
{
  AutocorrResult res;
  res.grid = grid_autocorrelation(cfg);
  res.radial = radial_average(res.grid, max_radius);
  return res;
}

// ---- analytic balls ---------------------------------------------------------

namespace detail {

/// int_x^1 (1 - t^2)^a dt
inline double ball_cap_integral(double x, double a)
{
  if (x >= 1.0) return 0.0;
  return 0.5 * boost::math::beta(0.5, a + 1.0) * boost::math::ibetac(0.5, a + 1.0, x * x);
}

/// int_0^x [1 - (1 - t^2)^a] dt without cancellation
inline double ball_excess_integral(double x, double a)
{
  if (x <= 0.0) return 0.0;
  if (x > 0.5) return ball_cap_integral(std::min(x, 1.0), a) - ball_cap_integral(0.0, a) + std::min(x, 1.0);
  static const auto rule = gauss_rule<20>(0.0, 1.0);
  double s = 0.0;
  for (auto [t, w] : rule) {
    double u = t * x;
    s += w * -std::expm1(a * std::log1p(-u * u));
  }
  return s * x;
}

} // namespace detail

/// Isolated ball of radius rho in a torus of side ell (no periodic images in range).
inline RadialAutocorrelation ball_autocorrelation(double rho, double ell, int d, const std::vector<double>& radii = {})
{
  if (d < 1 || d > 3) throw ParameterError("ball dimension must be 1, 2 or 3");
  if (!(rho > 0.0) || !(ell > 0.0)) throw ParameterError("ball radius and side length must be > 0");
  if (!(rho < 0.25 * ell)) throw PreconditionError("ball_autocorrelation needs rho < ell/4");
  const double T = std::pow(ell, d);
  const double a = 0.5 * (d - 1);
  const double pref = 2.0 * ball_volume(d - 1) * std::pow(rho, d) / T;
  const double c0 = ball_volume(d) * std::pow(rho, d) / T;
  const double slope = -ball_volume(d - 1) * std::pow(rho, d - 1) / T;
  AnalyticProfile p;
  p.value = [=](double r) {
    double x = r / (2.0 * rho);
    if (x <= 0.0) return c0;
    if (x >= 1.0) return 0.0;
    return pref * detail::ball_cap_integral(x, a);
  };
  p.excess = [=](double r) {
    double x = r / (2.0 * rho);
    if (x >= 1.0) return -c0 - r * slope;
    return pref * detail::ball_excess_integral(x, a);
  };
  p.breakpoints = {};
  p.support = 2.0 * rho;
  p.tail_value = 0.0;
  p.tail_error = 0.0;
  p.affine_radius = d == 1 ? 2.0 * rho : 0.0;
  p.remainder_order = d == 1 ? 0 : 3;

  RadialAutocorrelation rad;
  rad.dimension = d;
  rad.torus_volume = T;
  rad.value_at_zero = c0;
  rad.slope_at_zero = slope;
  rad.source = AutocorrSource::AnalyticBall;
  rad.radii = radii;
  if (rad.radii.empty())
    for (int i = 0; i <= 200; ++i) rad.radii.push_back(2.0 * rho * i / 160.0);
  for (double r : rad.radii) rad.values.push_back(r >= p.support ? 0.0 : p.value(r));
  rad.profile = std::move(p);
  return rad;
}

// ---- analytic stripes -------------------------------------------------------

namespace detail {

/// 1-d periodic autocorrelation of the stripes, exact and piecewise linear
inline double stripe_c1(const StripePattern& p, double x)
{
  const double a = p.period();
  double y = std::fmod(std::abs(x), a);
  return (std::max(0.0, p.d0 - y) + std::max(0.0, y - p.d1)) / a;
}

/// int_0^x C1, using the period mean lambda^2
inline double stripe_c1_integral(const StripePattern& p, double x)
{
  const double a = p.period(), lam = p.fraction();
  double full = std::floor(x / a);
  double y = x - full * a;
  auto ramp = [](double w, double t) {  // int_0^t max(0, w - s) ds
    double u = std::min(t, w);
    return w * u - 0.5 * u * u;
  };
  auto rise = [](double w, double t) {  // int_0^t max(0, s - w) ds
    return t > w ? 0.5 * (t - w) * (t - w) : 0.0;
  };
  double part = (ramp(p.d0, y) + rise(p.d1, y)) / a;
  return full * lam * lam * a + part;
}

/// kink positions of C1 in (0, r)
inline std::vector<double> stripe_kinks(const StripePattern& p, double r)
{
  const double a = p.period();
  std::vector<double> k;
  for (long j = 0; j * a < r; ++j) {
    for (double off : {0.0, p.d0, p.d1}) {
      double x = j * a + off;
      if (x > 0.0 && x < r) k.push_back(x);
    }
  }
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

inline double stripe_spherical_average(const StripePattern& p, double r)
{
  const int d = p.dimension;
  if (r <= 0.0) return p.fraction();
  if (d == 1) return stripe_c1(p, r);
  if (d == 3) return stripe_c1_integral(p, r) / r;
  // d = 2: (2/pi) int_0^{pi/2} C1(r cos th) dth, exact on each linear piece
  auto kinks = stripe_kinks(p, r);
  std::vector<double> xs{0.0};
  xs.insert(xs.end(), kinks.begin(), kinks.end());
  xs.push_back(r);
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    double x0 = xs[j], x1 = xs[j + 1];
    // active branches of C1 on (x0, x1), decided at the midpoint
    double xm = 0.5 * (x0 + x1);
    double ja = std::floor(xm / p.period()) * p.period();
    double ym = xm - ja, alpha = 0.0, beta = 0.0;
    if (ym < p.d0) {
      alpha += (p.d0 + ja) / p.period();
      beta -= 1.0 / p.period();
    }
    if (ym > p.d1) {
      alpha -= (ja + p.d1) / p.period();
      beta += 1.0 / p.period();
    }
    double th_hi = std::acos(std::clamp(x0 / r, -1.0, 1.0));
    double th_lo = std::acos(std::clamp(x1 / r, -1.0, 1.0));
    double sin_hi = std::sqrt(std::max(0.0, 1.0 - (x0 / r) * (x0 / r)));
    double sin_lo = std::sqrt(std::max(0.0, 1.0 - (x1 / r) * (x1 / r)));
    s += alpha * (th_hi - th_lo) + beta * r * (sin_hi - sin_lo);
  }
  return 2.0 / pi * s;
}

} // namespace detail

/// Exact radial autocorrelation of periodic stripes; torus volume is one period cell a^d.
inline RadialAutocorrelation stripe_autocorrelation(const StripePattern& p, const std::vector<double>& radii = {},
                                                    double far_periods = 200.0)
{
  p.validate();
  const int d = p.dimension;
  const double a = p.period(), lam = p.fraction();
  const double slope = -(ball_volume(d - 1) / sphere_area(d)) * (2.0 / a);
  const double affine = std::min(p.d0, p.d1);
  AnalyticProfile prof;
  prof.value = [p](double r) { return detail::stripe_spherical_average(p, r); };
  prof.excess = [p, slope, affine, lam](double r) {
    if (r <= affine) return 0.0;
    return detail::stripe_spherical_average(p, r) - lam - r * slope;
  };
  double R = far_periods * a;
  if (d == 1) R *= 10.0;
  prof.support = R;
  prof.breakpoints = detail::stripe_kinks(p, R);
  prof.tail_value = lam * lam;
  double osc = 0.0;
  for (int i = 0; i <= 64; ++i) {
    double r = R + 2.0 * a * i / 64.0;
    osc = std::max(osc, std::abs(detail::stripe_spherical_average(p, r) - lam * lam));
  }
  prof.tail_error = osc;
  prof.affine_radius = affine;
  prof.remainder_order = 0;

  RadialAutocorrelation rad;
  rad.dimension = d;
  rad.torus_volume = std::pow(a, d);
  rad.value_at_zero = lam;
  rad.slope_at_zero = slope;
  rad.source = AutocorrSource::AnalyticStripe;
  rad.radii = radii;
  if (rad.radii.empty())
    for (int i = 0; i <= 400; ++i) rad.radii.push_back(4.0 * a * i / 400.0);
  for (double r : rad.radii) rad.values.push_back(detail::stripe_spherical_average(p, r));
  rad.profile = std::move(prof);
  return rad;
}

// ---- perimeter --------------------------------------------------------------

struct PerimeterEstimate {
  double value = 0.0;
  double slope = 0.0;
  bool reliable = true;
};

/// ||grad u|| = -c'(0) sigma_{d-1} |T| / omega_{d-1}
inline PerimeterEstimate perimeter_estimate(const RadialAutocorrelation& rad, double torus_volume)
{
  PerimeterEstimate p;
  p.slope = rad.slope_at_zero;
  p.reliable = rad.slope_reliable;
  const int d = rad.dimension;
  p.value = std::max(0.0, -p.slope * sphere_area(d) * torus_volume / ball_volume(d - 1));
  return p;
}

// ---- property checks --------------------------------------------------------

struct PropertyCheck {
  std::string name;
  bool passed = false;
  double slack = 0.0;  // bound minus measured (>= 0 on pass)
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_passed() const
  {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
  }
  void add(std::string name, double bound, double measured)
  {
    checks.push_back({std::move(name), measured <= bound, bound - measured});
  }
};

/// Numerical checks of the autocorrelation properties on one configuration.
/// `seed` drives the perturbation and the sampled shift pairs.
inline PropertyReport verify_autocorr_properties(const GridAutocorrelation& g, const TorusConfig& cfg,
                                                 std::uint64_t seed = 1)
{
  PropertyReport rep;
  const std::size_t N = g.values.size();
  const int d = g.dimension, n = g.n;
  const double h = g.ell / n;
  const double T = cfg.volume();
  const double lam = cfg.volume_fraction();
  std::mt19937_64 rng(seed);

  double mx = 0.0;
  for (std::size_t i = 1; i < N; ++i) mx = std::max(mx, g.values[i]);
  rep.add("max_at_zero", g.values[0], mx);
  rep.add("value_at_zero_is_fraction", 1e-14, std::abs(g.values[0] - lam));

  // point reflection symmetry C(-k) = C(k)
  double asym = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    auto c = cfg.coords(i);
    for (int a = 0; a < d; ++a) c[a] = -c[a];
    asym = std::max(asym, std::abs(g.values[i] - g.values[cfg.index(c)]));
  }
  rep.add("reflection_symmetry", 0.0, asym);

  // perturbation stability, factor 2 (see README)
  {
    TorusConfig pert = cfg;
    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    std::size_t flips = std::max<std::size_t>(1, N / 100);
    std::vector<std::uint8_t> flipped(N, 0);
    for (std::size_t j = 0; j < flips; ++j) {
      std::size_t i = pick(rng);
      pert.set(i, !pert.occupied(i));
      flipped[i] ^= 1;
    }
    double l1 = 0.0;
    for (auto f : flipped) l1 += f;
    l1 *= std::pow(h, d) / T;
    auto gp = grid_autocorrelation(pert);
    double sup = 0.0;
    for (std::size_t i = 0; i < N; ++i) sup = std::max(sup, std::abs(g.values[i] - gp.values[i]));
    rep.add("perturbation_stability", 2.0 * l1 + 1e-15, sup);
  }

  // Fubini: mean of C_u equals lambda^2
  {
    NeumaierSum s;
    for (double v : g.values) s.add(v);
    rep.add("mean_equals_lambda_squared", 1e-10, std::abs(s.value() / N - lam * lam));
  }

  // Lipschitz along each axis: |dC/dz_i| <= ||d_i u|| / |T|
  for (int a = 0; a < d; ++a) {
    double bound = cfg.interface_faces(a) * std::pow(h, d - 1) / T;
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      std::size_t j = cfg.neighbor(i, a, 1);
      worst = std::max(worst, std::abs(g.values[j] - g.values[i]) / h);
    }
    rep.add("lipschitz_axis_" + std::to_string(a), bound + 1e-12, worst);
  }

  // |C(z2) - C(z1)| <= C(0) - C(z2 - z1) on sampled pairs
  {
    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    double worst = -1e300;
    for (int t = 0; t < 400; ++t) {
      std::size_t i1 = pick(rng), i2 = pick(rng);
      auto c1 = cfg.coords(i1), c2 = cfg.coords(i2);
      std::array<int, 3> dd{0, 0, 0};
      for (int a = 0; a < d; ++a) dd[a] = c2[a] - c1[a];
      double lhs = std::abs(g.values[i2] - g.values[i1]);
      double rhs = g.values[0] - g.values[cfg.index(dd)];
      worst = std::max(worst, lhs - rhs);
    }
    rep.add("increment_bound", 1e-15, worst);
  }

  // complement identity C_{1-u} = C_u + 1 - 2 lambda
  {
    auto gc = grid_autocorrelation(cfg.complement());
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      worst = std::max(worst, std::abs(gc.values[i] - (g.values[i] + 1.0 - 2.0 * lam)));
    rep.add("complement_identity", 1e-12, worst);
  }

  // radial profile: 0 <= c <= c(0), far field stays within the trivial envelope around lambda^2
  {
    auto rad = radial_average(g);
    double lo = 0.0, hi = 0.0, far = 0.0;
    for (std::size_t i = 0; i < rad.values.size(); ++i) {
      lo = std::max(lo, -rad.values[i]);
      hi = std::max(hi, rad.values[i] - rad.value_at_zero);
      if (rad.radii[i] >= 0.25 * g.ell) far = std::max(far, std::abs(rad.values[i] - lam * lam));
    }
    rep.add("radial_nonnegative", 1e-15, lo);
    rep.add("radial_below_value_at_zero", 1e-15, hi);
    rep.add("far_field_bounded", lam * (1.0 - lam) + 1e-15, far);
  }
  return rep;
}

} // namespace nlperim

#endif
