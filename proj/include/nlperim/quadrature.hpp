#ifndef NLPERIM_QUADRATURE_HPP
#define NLPERIM_QUADRATURE_HPP

#include <cmath>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace nlperim {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// adaptive Gauss-Kronrod (G30/K61) on a finite interval
template <class F>
QuadResult integrate_gk(F f, double a, double b, double tol = 1e-12, unsigned depth = 15)
{
  QuadResult r;
  if (!(b > a)) return r;
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, depth, tol, &r.error, &l1);
  r.error = std::abs(r.error);
  return r;
}

/// tanh-sinh for integrands with endpoint singularities
template <class F>
QuadResult integrate_ts(F f, double a, double b, double tol = 1e-12)
{
  QuadResult r;
  if (!(b > a)) return r;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double l1 = 0.0;
  auto g = [&f](double x, double) { return f(x); };
  r.value = ts.integrate(g, a, b, tol, &r.error, &l1);
  r.error = std::abs(r.error);
  return r;
}

/// Gauss-Legendre rule with N nodes mapped to [a,b], as (x, w) pairs
template <unsigned N>
std::vector<std::pair<double, double>> gauss_rule(double a, double b)
{
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0.0) {
      out.emplace_back(c, h * ws[i]);
    } else {
      out.emplace_back(c - h * xs[i], h * ws[i]);
      out.emplace_back(c + h * xs[i], h * ws[i]);
    }
  }
  return out;
}

/// compensated summation
class NeumaierSum {
 public:
  void add(double v)
  {
    double t = s_ + v;
    if (std::abs(s_) >= std::abs(v)) c_ += (s_ - t) + v;
    else c_ += (v - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

} // namespace nlperim

#endif
