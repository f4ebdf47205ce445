// Acceptance checks 1-12: one [PASS]/[FAIL] line each, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nlperim/nlperim.hpp>

#include "oracles.hpp"

using namespace nlperim;

namespace {

const double kE = std::exp(1.0);
const double kPi = oracle::pi;

struct Verdict {
  bool ok = true;
  std::string detail;

  void check(bool cond, const char* fmt, auto... args)
  {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!cond) {
      ok = false;
      detail += " (!)";
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;  // <= 0: no runtime bound
  std::function<void(Verdict&)> run;
};

void c01(Verdict& v)
{
  const double h = harmonic_number(0.5), ref = 2.0 - 2.0 * std::log(2.0);
  v.check(std::abs(h - ref) <= 1e-12, "|H_1/2 - (2-2ln2)| = %.2e", std::abs(h - ref));
  v.check(std::abs(harmonic_number(1.0) - 1.0) <= 1e-12, "H_1 = %.15g", harmonic_number(1.0));
  v.check(std::abs(harmonic_number(2.0) - 1.5) <= 1e-12, "H_2 = %.15g", harmonic_number(2.0));
}

void c02(Verdict& v)
{
  const double w = kPi / kE, ref = -2.0 * kE / kPi;
  StripePattern p{2, w, w};
  auto o = optimal_stripe(0.5, 2);
  v.check(std::abs(o.energy - ref) <= 1e-10, "optimal %.2e", std::abs(o.energy - ref));
  v.check(std::abs(stripe_energy(p) - ref) <= 1e-10, "closed form %.2e", std::abs(stripe_energy(p) - ref));
  double sl = stripe_energy_via_slices(p, 1000000);
  v.check(std::abs(sl - ref) <= 1e-3, "slices %.2e", std::abs(sl - ref));
  double rq = energy_radial(stripe_autocorrelation(p), power_cutoff(0.0, 2)).value;
  v.check(std::abs(rq - ref) <= 1e-3, "radial %.2e", std::abs(rq - ref));
}

void c03(Verdict& v)
{
  double worst = 0.0;
  bool bound = true;
  for (int d : {2, 3})
    for (double t : {0.01, 0.0625, 0.2}) {
      double rho = std::sqrt(t);
      double got = two_ball_interaction(rho, 1.0, d), ref = oracle::two_ball_mean(rho, 1.0, d);
      worst = std::max(worst, std::abs(got - ref) / ref);
      bound = bound && got >= 1.0 + 3.0 * (d + 1) / (d + 2) * t;
    }
  v.check(worst <= 2e-3, "max rel err %.2e", worst);
  v.check(bound, "lower bound %s", bound ? "held" : "violated");
}

void c04(Verdict& v)
{
  auto o = optimal_ball_lattice(1e-3, named_lattice("triangular"), 2);
  double e = o.energy / 1e-3, re = -16.0 / kE, rr = kE / 4.0;
  v.check(std::abs(e - re) <= 0.02 * std::abs(re), "e_B/lambda %.5f vs %.5f", e, re);
  v.check(std::abs(o.radius - rr) <= 0.05 * rr, "rho %.5f vs %.5f", o.radius, rr);
}

void c05(Verdict& v)
{
  for (const char* name : {"square", "triangular"}) {
    auto lo = compare_phases(0.05, {named_lattice(name)}, 2);
    auto hi = compare_phases(0.5, {named_lattice(name)}, 2);
    v.check(lo.phase == Phase::Balls && lo.margin > 0.0, "%s 0.05 balls margin %.4g", name, lo.margin);
    v.check(hi.phase == Phase::Stripes && hi.margin > 0.0, "%s 0.5 stripes margin %.4g", name, hi.margin);
  }
}

void c06(Verdict& v)
{
  auto z = lattice_zeta(named_lattice("triangular"), 3.0, 1e-6);
  v.check(z.tail_bound <= 1e-6, "tail %.2e", z.tail_bound);
  v.check(z.value - z.tail_bound > 8.0, "zeta %.9f", z.value);
}

void c07(Verdict& v)
{
  auto sup = [](int n) {
    auto fft = autocorrelation_fft(make_ball(2, 8.0, n, 1.0), 2.5);
    double err = 0.0;
    for (std::size_t i = 0; i < fft.radial.radii.size(); ++i)
      err = std::max(err, std::abs(fft.radial.values[i] - oracle::disk_autocorrelation(1.0, 64.0, fft.radial.radii[i])));
    return err;
  };
  double e256 = sup(256), e512 = sup(512);
  v.check(e256 <= 5.0 / 256, "n=256 %.3e", e256);
  v.check(e512 <= 5.0 / 512, "n=512 %.3e", e512);
  v.check(e512 <= 0.75 * e256, "ratio %.3f", e512 / e256);
}

void c08(Verdict& v)
{
  const double w = kPi / kE;
  auto st = epsilon_sweep(stripe_autocorrelation({2, w, w}), power_cutoff(0.0, 2), {1.0, 0.5, 0.25, 0.1});
  double worst = 0.0;
  bool exact = true;
  for (const auto& p : st.points) {
    double gap = std::abs(p.report.value - st.limit.value);
    worst = std::max(worst, gap);
    exact = exact && gap <= p.report.quadrature_error + st.limit.quadrature_error;
  }
  v.check(exact, "stripe gap %.2e", worst);
  auto b = epsilon_sweep(ball_autocorrelation(1.0, 8.0, 2), power_cutoff(0.0, 2), {0.2, 0.1, 0.05, 0.025});
  v.check(std::abs(b.rate - 2.0) <= 0.1, "ball rate %.4f", b.rate);
}

void c09(Verdict& v)
{
  auto rad = ball_autocorrelation(1.0, 8.0, 2);
  const double ref = 2.0 * kPi / 64.0;
  for (auto [name, fam] : {std::pair{"power_cutoff", power_cutoff(0.0, 2)},
                           std::pair{"fractional_shift", fractional_shift(0.0, 2)}}) {
    double r = davila_limit(rad, fam, {1e-1, 1e-2, 1e-3}).points.back().ratio;
    v.check(std::abs(r - ref) <= 0.02 * ref, "%s %.5f vs %.5f", name, r, ref);
  }
}

void c10(Verdict& v)
{
  auto s = divergence_partial_sums({1000, 1000000});
  v.check(s[1].energy_sum - s[0].energy_sum >= 0.6, "S(1e6)-S(1e3) = %.4f", s[1].energy_sum - s[0].energy_sum);
  v.check(s[1].bv_sum < 2.2, "sum r_k = %.4f", s[1].bv_sum);
}

void c11(Verdict& v)
{
  auto rep = run_property_suite();
  std::size_t failed = 0;
  std::string first;
  for (const auto& c : rep.checks)
    if (!c.passed && failed++ == 0) first = c.name;
  v.check(failed == 0, "%zu/%zu checks passed%s%s", rep.checks.size() - failed, rep.checks.size(),
          failed ? ", first failure " : "", first.c_str());
}

void c12(Verdict& v)
{
  // ell = 4 puts the ball well below the preferred radius e/4
  const int n = 64;
  const double ell = 4.0;
  const std::size_t cells = 120;
  auto k = power_cutoff(2.0 * ell / n, 2);
  AnnealSchedule s;
  s.initial_temperature = 0.3;
  s.steps = 5000000;
  s.cooling_factor = std::exp(std::log(0.01 / 0.3) / static_cast<double>(s.steps));
  const double eb = GridEnergy(2, n, ell, k).energy(make_ball_cells(2, ell, n, cells));
  int good = 0;
  std::string runs;
  for (std::uint64_t seed = 42; seed < 47; ++seed) {
    auto st = anneal(make_random_cells(2, ell, n, cells, seed), k, s, seed);
    double a = fraenkel_asymmetry(st.best_config), rel = std::abs(st.best_energy - eb) / std::abs(eb);
    good += a < 0.15 && rel <= 0.03;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%.3f/%.4f", runs.empty() ? "" : " ", a, rel);
    runs += buf;
  }
  v.check(good >= 4, "%d/5 runs at a ball (asym/rel: %s)", good, runs.c_str());
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "harmonic number H_1/2", 1.0, c01},
      {2, "optimal stripes e_S(1/2)", 10.0, c02},
      {3, "two-ball interaction", 60.0, c03},
      {4, "ball lattice leading order", 30.0, c04},
      {5, "phase diagram", 0.0, c05},
      {6, "triangular lattice sum", 5.0, c06},
      {7, "FFT autocorrelation error", 10.0, c07},
      {8, "epsilon exactness and rate", 0.0, c08},
      {9, "first-order ratio", 0.0, c09},
      {10, "divergence example", 5.0, c10},
      {11, "property suite", 0.0, c11},
      {12, "annealing reaches a ball", 600.0, c12},
  };

  int failed = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.check(false, "threw: %s", e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0) v.check(secs < c.budget_s, "budget %.0f s", c.budget_s);
    failed += !v.ok;
    std::printf("[%s] %2d %s: %s (%.2f s)\n", v.ok ? "PASS" : "FAIL", c.id, c.title.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
