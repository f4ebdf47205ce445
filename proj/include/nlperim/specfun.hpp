#ifndef NLPERIM_SPECFUN_HPP
#define NLPERIM_SPECFUN_HPP

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace nlperim {

/// H_q = int_0^1 (1 - t^q)/(1 - t) dt
inline double harmonic_number(double q)
{
  if (!(q >= 0.0)) throw DomainError("harmonic_number: q must be >= 0");
  if (q == 0.0) return 0.0;
  // x in (0,1); xc is the distance to the nearer endpoint, kept exact near t = 1
  auto f = [q](double x, double xc) {
    double s = x > 0.5 ? xc : 1.0 - x;
    return -std::expm1(q * std::log1p(-s)) / s;
  };
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, 0.0, 1.0, 1e-15);
}

inline double pochhammer(double a, unsigned n)
{
  double p = 1.0;
  for (unsigned i = 0; i < n; ++i) p *= a + i;
  return p;
}

struct AppellSeriesResult {
  double value = 1.0;
  long terms_used = 0;   // anti-diagonals m + n = s summed
  double tail_bound = 0.0;
};

/// H_d(t) = F4(3/2, (d+1)/2; (d+2)/2, (d+2)/2; t, t), 0 <= t < 1/4.
/// Summed along anti-diagonals; the tail is bounded with (c)_m >= m!, which
/// gives A_s <= (3/2)_s (h)_s t^s C(2s,s)/s!^2 and a geometric majorant.
inline AppellSeriesResult appell_h(int d, double t, double tol = 1e-14)
{
  if (d < 1) throw ParameterError("appell_h: d must be >= 1");
  if (!(t >= 0.0)) throw DomainError("appell_h: t must be >= 0");
  if (!(t < 0.25)) throw ConvergenceError("appell_h: series diverges for t >= 1/4");
  if (!(tol > 0.0)) throw ParameterError("appell_h: tol must be > 0");
  AppellSeriesResult res;
  if (t == 0.0) {
    res.value = 1.0;
    res.terms_used = 1;
    return res;
  }
  const double h = 0.5 * (d + 1);
  const double c = 0.5 * (d + 2);
  // log of the majorant of anti-diagonal s
  auto log_bar = [&](long s) {
    double ls = static_cast<double>(s);
    return std::lgamma(1.5 + ls) - std::lgamma(1.5) + std::lgamma(h + ls) - std::lgamma(h)
           + ls * std::log(t) + std::lgamma(2 * ls + 1) - 4.0 * std::lgamma(ls + 1);
  };
  NeumaierSum sum;
  double lead = 1.0;  // T(0, s) = (3/2)_s (h)_s t^s / ((c)_s s!)
  const long max_s = 2000000;
  for (long s = 0; s < max_s; ++s) {
    double term = lead, diag = 0.0;
    for (long m = 0; m <= s; ++m) {
      diag += term;
      if (m < s) term *= (c + s - m - 1.0) * (s - m) / ((c + m) * (m + 1.0));
    }
    sum.add(diag);
    long S = s + 1;  // first omitted anti-diagonal
    double rho = 4.0 * t * (S + h) / (S + 1.0);
    if (rho < 1.0) {
      double bound = std::exp(log_bar(S)) / (1.0 - rho);
      if (bound <= tol) {
        res.value = sum.value();
        res.terms_used = S;
        res.tail_bound = bound;
        return res;
      }
    }
    lead *= (1.5 + s) * (h + s) * t / ((c + s) * (s + 1.0));
  }
  throw ConvergenceError("appell_h: tail bound not reached");
}

} // namespace nlperim

#endif
