// Stripe and lattice-ball energies in the plane for a few volume fractions.
#include <cstdio>

#include <nlperim/nlperim.hpp>

int main()
{
  using namespace nlperim;
  std::vector<BravaisLattice> lats{named_lattice("square"), named_lattice("triangular")};
  std::vector<LatticeSum> zetas;
  for (const auto& L : lats) zetas.push_back(ball_lattice_zeta(L));
  std::printf("%8s %12s %12s %12s  %s\n", "lambda", "e_S", "square", "triangular", "winner");
  for (double lam : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5}) {
    auto v = compare_phases(lam, lats, 2, zetas);
    std::printf("%8.3f %12.6f", lam, v.stripe_energy);
    for (const auto& c : v.candidates) std::printf(" %12.6f", c.feasible ? c.energy : 0.0);
    std::printf("  %s %s\n", phase_name(v.phase).c_str(), v.lattice.c_str());
  }
}
