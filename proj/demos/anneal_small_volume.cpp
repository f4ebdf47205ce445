// Anneal 120 cells on a 64x64 torus from a random start and draw the result.
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <nlperim/nlperim.hpp>

int main(int argc, char** argv)
{
  using namespace nlperim;
  const int n = 64;
  const double ell = 4.0;
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
  const long steps = argc > 2 ? std::atol(argv[2]) : 2000000;

  auto init = make_random_cells(2, ell, n, 120, seed);
  Kernel k = power_cutoff(2.0 * ell / n, 2);
  AnnealSchedule s;
  s.initial_temperature = 0.3;
  s.steps = steps;
  s.cooling_factor = std::exp(std::log(0.01 / 0.3) / steps);
  auto st = anneal(init, k, s, seed);

  GridEnergy ge(2, n, ell, k);
  double eb = ge.energy(make_ball_cells(2, ell, n, 120));
  std::printf("best %.6f  ball %.6f  (%+.2f%%)  asymmetry %.3f\n", st.best_energy, eb,
              100.0 * (st.best_energy / eb - 1.0), fraenkel_asymmetry(st.best_config));
  const auto& c = st.best_config;
  for (int y = 0; y < n; ++y) {
    std::string line;
    bool any = false;
    for (int x = 0; x < n; ++x) {
      bool o = c.occupied(c.index({y, x, 0}));
      any |= o;
      line += o ? '#' : '.';
    }
    if (any) std::printf("%s\n", line.c_str());
  }
}
