// FFT autocorrelation of a rasterized disk against the exact profile.
#include <cmath>
#include <cstdio>

#include <nlperim/nlperim.hpp>

int main()
{
  using namespace nlperim;
  const double ell = 8.0, rho = 1.0;
  auto exact = ball_autocorrelation(rho, ell, 2);
  std::printf("%6s %12s %12s %12s\n", "n", "sup err", "perimeter", "energy");
  for (int n : {64, 128, 256, 512}) {
    auto ac = autocorrelation_fft(make_ball(2, ell, n, rho));
    double err = 0.0;
    for (std::size_t i = 0; i < ac.radial.radii.size(); ++i)
      err = std::max(err, std::abs(ac.radial.values[i] - exact(ac.radial.radii[i])));
    double per = perimeter_estimate(ac.radial, ell * ell).value;
    double e = energy_radial(ac.radial, power_cutoff(0.0, 2)).value;
    std::printf("%6d %12.3e %12.6f %12.6f\n", n, err, per, e);
  }
  std::printf("%6s %12s %12.6f %12.6f\n", "exact", "", 2.0 * pi, energy_radial(exact, power_cutoff(0.0, 2)).value);
}
