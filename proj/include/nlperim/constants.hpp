#ifndef NLPERIM_CONSTANTS_HPP
#define NLPERIM_CONSTANTS_HPP

#include <cmath>
#include <numbers>

namespace nlperim {

inline constexpr double pi = std::numbers::pi;

/// volume of the unit ball in R^k (k >= 0)
inline double ball_volume(int k)
{
  return std::pow(pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

/// surface area of the unit sphere S^{d-1}
inline double sphere_area(int d)
{
  return d * ball_volume(d);
}

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace nlperim

#endif
