#ifndef NLPERIM_VERIFY_HPP
#define NLPERIM_VERIFY_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "autocorr.hpp"
#include "energy.hpp"
#include "torus.hpp"

namespace nlperim {

struct VerifyOptions {
  std::uint64_t seed = 1;
  int random_configs = 20;
  int disjoint_pairs = 50;
  int n = 32;
  double ell = 8.0;
};

namespace detail {

inline void record_energy_bounds(PropertyReport& rep, const std::string& tag, const RadialAutocorrelation& rad,
                                 const Kernel& k)
{
  auto lb = lower_bound_check(rad, k);
  rep.checks.push_back({tag + "/lower_bound", lb.ok, lb.lhs - lb.rhs});
  auto e = energy_radial(rad, k);
  double tol = e.quadrature_error + 1e-12;
  rep.add(tag + "/near_field_nonnegative", tol, -e.near_field);
  rep.add(tag + "/far_field_nonpositive", tol, e.far_field);
  if (k.family == KernelFamily::PowerCutoff && k.epsilon < 0.5) {
    auto bv = bv_bound_check(rad, k);
    rep.checks.push_back({tag + "/bv_bound", bv.ok, bv.rhs - bv.lhs});
  }
}

} // namespace detail

/// Autocorrelation bounds on seeded random configurations, complement symmetry of the
/// energy, nonnegativity of the interaction energy on disjoint pairs, the BV bound and
/// the lower bound on every energy evaluated.
inline PropertyReport run_property_suite(const VerifyOptions& opt = {})
{
  PropertyReport rep;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> frac(0.05, 0.6);
  const int d = 2;
  const Kernel k = power_cutoff(2.0 * opt.ell / opt.n, d);

  for (int i = 0; i < opt.random_configs; ++i) {
    const std::string tag = "random_" + std::to_string(i);
    std::uint64_t s = rng();
    auto cfg = make_random(d, opt.ell, opt.n, frac(rng), s);
    auto ac = autocorrelation_fft(cfg);
    for (auto& c : verify_autocorr_properties(ac.grid, cfg, s).checks)
      rep.checks.push_back({tag + "/" + c.name, c.passed, c.slack});
    detail::record_energy_bounds(rep, tag, ac.radial, k);
  }

  // structured shapes next to the random ones
  std::vector<std::pair<std::string, TorusConfig>> shapes{
      {"ball", make_ball(d, opt.ell, opt.n, 1.5)},
      {"stripes", make_stripes(d, opt.ell, opt.n, 2, 0.5)},
      {"two_balls", make_two_balls(d, opt.ell, opt.n, 1.0, 4.0)},
  };
  for (auto& [name, cfg] : shapes) {
    auto a = autocorrelation_fft(cfg).radial;
    auto b = autocorrelation_fft(cfg.complement()).radial;
    detail::record_energy_bounds(rep, name, a, k);
    detail::record_energy_bounds(rep, name + "_complement", b, k);
    auto ea = energy_radial(a, k), eb = energy_radial(b, k);
    rep.add(name + "/complement_symmetry", ea.quadrature_error + eb.quadrature_error + 1e-10,
            std::abs(ea.value - eb.value));
  }

  // disjoint pairs: split a random set between u1 and u2
  const int pn = opt.n / 2;
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < opt.disjoint_pairs; ++i) {
    auto base = make_random(d, opt.ell, pn, frac(rng), rng());
    auto u1 = TorusConfig::empty(d, opt.ell, pn), u2 = u1;
    for (std::size_t c = 0; c < base.cell_count(); ++c)
      if (base.occupied(c)) (coin(rng) ? u1 : u2).set(c, true);
    double I = interaction_energy(u1, u2, power_cutoff(2.0 * opt.ell / pn, d));
    rep.add("pair_" + std::to_string(i) + "/interaction_nonnegative", 0.0, -I);
  }
  return rep;
}

} // namespace nlperim

#endif
