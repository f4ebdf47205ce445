// Independent reference computations for the tests.
#ifndef NLPERIM_TESTS_ORACLES_HPP
#define NLPERIM_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

constexpr double pi = 3.14159265358979323846;

using Mat = std::vector<std::array<double, 3>>;

inline double det(const Mat& b, int d)
{
  if (d == 1) return b[0][0];
  if (d == 2) return b[0][0] * b[1][1] - b[0][1] * b[1][0];
  return b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
         b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
}

/// rows of the dual basis: B* = B^{-T}
inline Mat dual(const Mat& b, int d)
{
  Mat out(d, {0.0, 0.0, 0.0});
  const double D = det(b, d);
  if (d == 1) {
    out[0][0] = 1.0 / D;
  } else if (d == 2) {
    out[0] = {b[1][1] / D, -b[1][0] / D, 0.0};
    out[1] = {-b[0][1] / D, b[0][0] / D, 0.0};
  } else {
    for (int i = 0; i < 3; ++i) {
      const auto& u = b[(i + 1) % 3];
      const auto& v = b[(i + 2) % 3];
      out[i] = {(u[1] * v[2] - u[2] * v[1]) / D, (u[2] * v[0] - u[0] * v[2]) / D, (u[0] * v[1] - u[1] * v[0]) / D};
    }
  }
  return out;
}

inline void lattice_points(const Mat& b, int d, int K, const std::function<void(double)>& f)
{
  const int K1 = d > 1 ? K : 0, K2 = d > 2 ? K : 0;
  for (int i = -K; i <= K; ++i)
    for (int j = -K1; j <= K1; ++j)
      for (int k = -K2; k <= K2; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
          double x = i * b[0][a] + (d > 1 ? j * b[1][a] : 0.0) + (d > 2 ? k * b[2][a] : 0.0);
          r2 += x * x;
        }
        f(r2);
      }
}

/// Gamma(-1/2, x) from Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))
inline double gamma_minus_half(double x)
{
  return 2.0 * (std::exp(-x) / std::sqrt(x) - std::sqrt(pi) * boost::math::erfc(std::sqrt(x)));
}

/// Epstein zeta sum_{e != 0} |e|^{-s} for s = d + 1 by Ewald splitting at t = 1.
inline double ewald_zeta(const Mat& b, int d, int K = 12)
{
  const double s = d + 1.0;
  const double V = std::abs(det(b, d));
  double direct = 0.0, recip = 0.0;
  lattice_points(b, d, K, [&](double r2) {
    double x = pi * r2;
    direct += boost::math::tgamma(0.5 * s, x) * std::pow(x, -0.5 * s);
  });
  lattice_points(dual(b, d), d, K, [&](double k2) {
    double x = pi * k2;
    recip += gamma_minus_half(x) * std::pow(x, 0.5);
  });
  double bracket = direct + recip / V + 2.0 / ((s - d) * V) - 2.0 / s;
  return std::pow(pi, 0.5 * s) / boost::math::tgamma(0.5 * s) * bracket;
}

/// mean of |x - y|^{-(d+1)} over x in B(0, rho), y in B(q e1, rho), tensor Gauss rules
inline double two_ball_mean(double rho, double q, int d)
{
  using boost::math::quadrature::gauss;
  constexpr int NR = 30, NA = 40;
  const auto& xr = gauss<double, NR>::abscissa();
  const auto& wr = gauss<double, NR>::weights();
  const auto& xa = gauss<double, NA>::abscissa();
  const auto& wa = gauss<double, NA>::weights();
  // nodes of the symmetric rule on [-1,1]
  auto expand = [](const auto& x, const auto& w) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.push_back({x[i], w[i]});
      if (x[i] != 0.0) out.push_back({-x[i], w[i]});
    }
    return out;
  };
  auto R = expand(xr, wr), A = expand(xa, wa);
  struct P {
    double x, y, z, w;
  };
  // in d = 3 the integrand only sees the azimuth difference, so the first ball
  // is sampled at azimuth 0 with the full 2 pi weight
  std::vector<P> ball, first;
  for (auto [ur, w1] : R) {
    double r = 0.5 * rho * (ur + 1.0), jr = 0.5 * rho * w1;
    if (d == 2) {
      for (auto [ut, w2] : A) {
        double th = pi * (ut + 1.0);
        ball.push_back({r * std::cos(th), r * std::sin(th), 0.0, jr * r * pi * w2});
      }
    } else {
      for (auto [c, w2] : A) {
        double sn = std::sqrt(1.0 - c * c);
        first.push_back({r * c, r * sn, 0.0, jr * r * r * w2 * 2.0 * pi});
        for (auto [up, w3] : A) {
          double ph = pi * (up + 1.0);
          ball.push_back({r * c, r * sn * std::cos(ph), r * sn * std::sin(ph), jr * r * r * w2 * pi * w3});
        }
      }
    }
  }
  if (d == 2) first = ball;
  double total = 0.0, vol = 0.0;
  for (const auto& p : ball) vol += p.w;
  for (const auto& a : first) {
    double inner = 0.0;
    for (const auto& bq : ball) {
      double dx = q + bq.x - a.x, dy = bq.y - a.y, dz = bq.z - a.z;
      double r2 = dx * dx + dy * dy + dz * dz;
      inner += bq.w * std::pow(r2, -0.5 * (d + 1));
    }
    total += a.w * inner;
  }
  return total / (vol * vol);
}

/// planar disk autocorrelation from the lens area
inline double disk_autocorrelation(double rho, double torus_area, double r)
{
  if (r >= 2.0 * rho) return 0.0;
  double x = r / (2.0 * rho);
  return (2.0 * rho * rho * (std::acos(x) - x * std::sqrt(1.0 - x * x))) / torus_area;
}

inline std::pair<double, double> golden_section(const std::function<double(double)>& f, double a, double b,
                                                double tol = 1e-12)
{
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  return {x, f(x)};
}

template <class F>
double integrate(F f, double a, double b)
{
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

/// for integrable endpoint singularities
template <class F>
double integrate_endpoints(F f, double a, double b)
{
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&f](double x, double) { return f(x); }, a, b, 1e-13);
}

} // namespace oracle

#endif
