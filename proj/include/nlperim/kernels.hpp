#ifndef NLPERIM_KERNELS_HPP
#define NLPERIM_KERNELS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"

namespace nlperim {

enum class KernelFamily { PowerCutoff, FractionalShift, SuperCritical };

inline std::string family_name(KernelFamily f)
{
  switch (f) {
    case KernelFamily::PowerCutoff: return "power_cutoff";
    case KernelFamily::FractionalShift: return "fractional_shift";
    case KernelFamily::SuperCritical: return "supercritical";
  }
  return "?";
}

inline KernelFamily family_from_name(const std::string& s)
{
  if (s == "power_cutoff") return KernelFamily::PowerCutoff;
  if (s == "fractional_shift") return KernelFamily::FractionalShift;
  if (s == "supercritical") return KernelFamily::SuperCritical;
  throw ParameterError("unknown kernel family '" + s + "'");
}

/// Radial kernel K_eps(r) = r^{-s} for r > c and 0 otherwise.
///   PowerCutoff:     s = d,       c = eps
///   FractionalShift: s = d - eps, c = 0
///   SuperCritical:   s = q,       c = eps
struct Kernel {
  KernelFamily family = KernelFamily::PowerCutoff;
  double epsilon = 0.0;
  int dimension = 2;
  double q = 0.0;  // SuperCritical only

  void validate() const
  {
    if (dimension < 1) throw ParameterError("kernel dimension must be >= 1");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
      throw ParameterError("kernel epsilon must be finite and >= 0");
    if (family == KernelFamily::SuperCritical && !(q >= dimension))
      throw ParameterError("supercritical kernel needs q >= d");
  }

  double exponent() const
  {
    switch (family) {
      case KernelFamily::PowerCutoff: return dimension;
      case KernelFamily::FractionalShift: return dimension - epsilon;
      case KernelFamily::SuperCritical: return q;
    }
    return dimension;
  }

  double cutoff() const
  {
    return family == KernelFamily::FractionalShift ? 0.0 : epsilon;
  }

  Kernel with_epsilon(double e) const
  {
    Kernel k = *this;
    k.epsilon = e;
    return k;
  }

  /// K_0 of the family
  Kernel limit() const { return with_epsilon(0.0); }
};

inline Kernel power_cutoff(double eps, int d) { return {KernelFamily::PowerCutoff, eps, d, 0.0}; }
inline Kernel fractional_shift(double eps, int d) { return {KernelFamily::FractionalShift, eps, d, 0.0}; }
inline Kernel supercritical(double eps, int d, double q) { return {KernelFamily::SuperCritical, eps, d, q}; }

inline double kernel_value(const Kernel& k, double r)
{
  k.validate();
  if (!(r > 0.0)) throw DomainError("kernel_value: r must be > 0");
  if (r <= k.cutoff()) return 0.0;
  return std::pow(r, -k.exponent());
}

/// int_a^b K(r) r^p dr in closed form; b may be +inf. Returns +inf when divergent.
inline double radial_moment(const Kernel& k, double p, double a, double b)
{
  const double inf = std::numeric_limits<double>::infinity();
  double lo = std::max(a, k.cutoff());
  if (!(b > lo)) return 0.0;
  double e1 = p - k.exponent() + 1.0;
  if (lo == 0.0) {
    if (e1 <= 0.0) return inf;
    if (std::isinf(b)) return inf;
    return std::pow(b, e1) / e1;
  }
  if (std::isinf(b)) {
    if (e1 >= 0.0) return inf;
    return -std::pow(lo, e1) / e1;
  }
  double L = std::log(b / lo);
  if (e1 == 0.0) return L;
  return std::pow(lo, e1) * std::expm1(e1 * L) / e1;
}

/// signed version: int_a^b with a > b allowed
inline double signed_moment(const Kernel& k, double p, double a, double b)
{
  return a <= b ? radial_moment(k, p, a, b) : -radial_moment(k, p, b, a);
}

inline double mollifier_mass(const Kernel& k)
{
  k.validate();
  double m = radial_moment(k, k.dimension - 1, 0.0, 1.0);
  if (std::isinf(m)) throw DivergenceError("mollifier mass diverges for this kernel");
  return ball_volume(k.dimension - 1) * m;
}

/// F(r) = sigma_{d-1} int_r^inf K t^{d-2} dt
inline double f_transform(const Kernel& k, double r)
{
  k.validate();
  if (!(r > 0.0)) throw DomainError("f_transform: r must be > 0");
  double m = radial_moment(k, k.dimension - 2, r, std::numeric_limits<double>::infinity());
  if (std::isinf(m)) throw DivergenceError("f_transform: tail integral diverges");
  return sphere_area(k.dimension) * m;
}

/// G(r) = |int_1^r F(t) dt|, by Fubini on the moments of K
inline double g_transform(const Kernel& k, double r)
{
  k.validate();
  if (!(r > 0.0)) throw DomainError("g_transform: r must be > 0");
  const double inf = std::numeric_limits<double>::infinity();
  const int d = k.dimension;
  double v;
  if (r >= 1.0) {
    v = radial_moment(k, d - 1, 1.0, r) - radial_moment(k, d - 2, 1.0, r)
        + (r - 1.0) * radial_moment(k, d - 2, r, inf);
  } else {
    v = radial_moment(k, d - 1, r, 1.0) - r * radial_moment(k, d - 2, r, 1.0)
        + (1.0 - r) * radial_moment(k, d - 2, 1.0, inf);
  }
  if (std::isinf(v) || std::isnan(v)) throw DivergenceError("g_transform: integral diverges");
  return sphere_area(d) * v;
}

inline bool check_ball_condition(const Kernel& k, double M, const std::vector<double>& etas)
{
  if (M == 0.0) return true;
  const int d = k.dimension;
  for (double eta : etas) {
    if (!(eta > 0.0 && eta < 0.5)) throw DomainError("check_ball_condition: eta must lie in (0, 1/2)");
    double lhs = radial_moment(k, d - 1, eta, 1.0);
    double r1 = radial_moment(k, d + 1, 0.0, eta) / (eta * eta);
    double r2 = eta * radial_moment(k, d - 2, eta, 1.0);
    double rhs = M * std::max(r1, r2);
    if (std::isinf(rhs) || lhs < rhs) return false;
  }
  return true;
}

struct AdmissibilityReport {
  bool unbounded_mass = false;   // int_0^1 K_0 r^{d-1} grows past the bound
  bool finite_tails = false;     // int_delta^inf K_0 min(r^{d-2}, r^{d-1}) finite
  std::vector<double> deltas;
  std::vector<double> partial_masses;
  std::vector<double> tails;
  bool admissible() const { return unbounded_mass && finite_tails; }
};

/// Checks the two admissibility conditions of K_0 numerically.
inline AdmissibilityReport check_admissibility(const Kernel& k, double bound = 10.0)
{
  k.validate();
  Kernel k0 = k.limit();
  const int d = k.dimension;
  const double inf = std::numeric_limits<double>::infinity();
  AdmissibilityReport rep;
  rep.deltas = {1e-2, 1e-4, 1e-6};
  bool increasing = true;
  rep.finite_tails = true;
  for (double delta : rep.deltas) {
    double m = radial_moment(k0, d - 1, delta, 1.0);
    if (!rep.partial_masses.empty() && !(m > rep.partial_masses.back())) increasing = false;
    rep.partial_masses.push_back(m);
    double t = radial_moment(k0, d - 1, delta, 1.0) + radial_moment(k0, d - 2, 1.0, inf);
    rep.tails.push_back(t);
    if (!std::isfinite(t)) rep.finite_tails = false;
  }
  // symbolic case: s >= d is the divergent regime of every family at eps = 0
  bool symbolic = k0.exponent() >= d;
  rep.unbounded_mass = symbolic && increasing && rep.partial_masses.back() > bound;
  return rep;
}

} // namespace nlperim

#endif
