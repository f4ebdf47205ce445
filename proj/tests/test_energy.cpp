#include <cmath>

#include <gtest/gtest.h>

#include <nlperim/energy.hpp>
#include <nlperim/patterns.hpp>

#include "oracles.hpp"

using namespace nlperim;

namespace {

const double kE = std::exp(1.0);

RadialAutocorrelation optimal_half_stripes() { return stripe_autocorrelation({2, oracle::pi / kE, oracle::pi / kE}); }

} // namespace

TEST(EnergyRadial, OptimalStripes)
{
  auto rep = energy_radial(optimal_half_stripes(), power_cutoff(0.0, 2));
  EXPECT_NEAR(rep.value, -2.0 * kE / oracle::pi, 1e-7);
  EXPECT_FALSE(rep.divergent);
}

TEST(EnergyRadial, FullTorusIsZero)
{
  auto rad = autocorrelation_fft(TorusConfig::empty(2, 4.0, 64).complement()).radial;
  EXPECT_NEAR(energy_radial(rad, power_cutoff(0.1, 2)).value, 0.0, 1e-12);
  EXPECT_NEAR(energy_radial(rad, power_cutoff(0.0, 2)).value, 0.0, 1e-12);
}

TEST(EnergyRadial, SingleBallSelfEnergy)
{
  auto rad = ball_autocorrelation(0.5, 8.0, 2);
  auto rep = energy_radial(rad, power_cutoff(0.0, 2));
  EXPECT_NEAR(rep.value * 64.0, -2.0 * oracle::pi * std::log(2.0), 1e-8);

  // quadrature of the radial formula with the lens-area profile; the excess
  // c - c0 - r c'(0) is (2 rho^2/|T|)(2x - asin x - x sqrt(1 - x^2)), x = r/(2 rho)
  const double c0 = oracle::disk_autocorrelation(0.5, 64.0, 0.0);
  auto near = [&](double r) {
    double x = r, ex = x < 1e-3 ? x * x * x / 3.0 + x * x * x * x * x / 20.0
                                : 2.0 * x - std::asin(x) - x * std::sqrt(1.0 - x * x);
    return 0.5 / 64.0 * ex / (r * r);
  };
  double ref = 2.0 * oracle::pi * (oracle::integrate(near, 0.0, 0.5) + oracle::integrate_endpoints(near, 0.5, 1.0) - c0);
  EXPECT_NEAR(rep.value, ref, 1e-10);
}

TEST(EnergyRadial, NearNonnegativeFarNonpositive)
{
  std::vector<RadialAutocorrelation> rads{ball_autocorrelation(0.7, 8.0, 2), ball_autocorrelation(0.4, 4.0, 3),
                                          stripe_autocorrelation({2, 0.3, 0.9}), optimal_half_stripes(),
                                          autocorrelation_fft(make_random(2, 4.0, 64, 0.3, 5)).radial};
  for (const auto& rad : rads)
    for (double eps : {0.0, 0.05, 0.3}) {
      auto rep = energy_radial(rad, power_cutoff(eps, rad.dimension));
      EXPECT_GE(rep.near_field, -rep.quadrature_error);
      EXPECT_LE(rep.far_field, rep.quadrature_error);
      EXPECT_NEAR(rep.value, rep.near_field + rep.far_field + rep.truncation_correction, 1e-12);
    }
}

TEST(EnergyRadial, SupercriticalBallDiverges)
{
  auto rad = ball_autocorrelation(0.5, 8.0, 2);
  EXPECT_TRUE(energy_radial(rad, supercritical(0.0, 2, 4.0)).divergent);
  EXPECT_TRUE(energy_radial(rad, supercritical(0.0, 2, 4.5)).divergent);
  auto ok = energy_radial(rad, supercritical(0.0, 2, 3.5));
  EXPECT_FALSE(ok.divergent);
  EXPECT_TRUE(std::isfinite(ok.value));
  // the cutoff makes it finite again
  EXPECT_FALSE(energy_radial(rad, supercritical(0.05, 2, 4.5)).divergent);
}

TEST(EnergyRadial, ComplementSymmetryOnFft)
{
  for (std::uint64_t seed : {3u, 4u}) {
    auto cfg = make_random(2, 4.0, 64, 0.35, seed);
    auto a = energy_radial(autocorrelation_fft(cfg).radial, power_cutoff(0.125, 2));
    auto b = energy_radial(autocorrelation_fft(cfg.complement()).radial, power_cutoff(0.125, 2));
    EXPECT_NEAR(a.value, b.value, a.quadrature_error + b.quadrature_error + 1e-12);
  }
}

TEST(EnergyRadial, FftMatchesAnalyticAt1024)
{
  // eight unit periods, so the mesh up to ell/2 spans four of them
  auto stripes = autocorrelation_fft(make_stripes(2, 8.0, 1024, 8, 0.5)).radial;
  double es = stripe_energy({2, 0.5, 0.5});
  EXPECT_NEAR(energy_radial(stripes, power_cutoff(0.0, 2)).value, es, 0.01 * std::abs(es));

  // one ball per torus is a square ball lattice, images included
  auto ball = autocorrelation_fft(make_ball(2, 8.0, 1024, 1.0)).radial;
  double eb = ball_lattice_energy({named_lattice("square").scaled(8.0), 1.0}).value;
  EXPECT_NEAR(energy_radial(ball, power_cutoff(0.0, 2)).value, eb, 0.01 * std::abs(eb));
}

TEST(TruncationShift, TotalUnchanged)
{
  auto k = power_cutoff(0.0, 2);
  auto ball = ball_autocorrelation(0.3, 8.0, 2);
  auto base = energy_radial(ball, k);
  auto same = truncation_shift(ball, k, 1.0);
  EXPECT_EQ(same.value, base.value);
  EXPECT_EQ(same.near_field, base.near_field);
  auto moved = truncation_shift(ball, k, 0.6);
  EXPECT_EQ(moved.truncation_radius, 0.6);
  EXPECT_NEAR(moved.value, base.value, base.quadrature_error + moved.quadrature_error + 1e-12);
  EXPECT_NE(moved.near_field, base.near_field);

  StripePattern p{2, 0.4, 0.8};
  auto st = stripe_autocorrelation(p);
  auto s1 = energy_radial(st, k), s2 = truncation_shift(st, k, 0.4);
  EXPECT_NEAR(s1.value, s2.value, s1.quadrature_error + s2.quadrature_error + 1e-12);
}

TEST(Interaction, EmptyPartnerAndOverlap)
{
  auto a = make_ball(2, 4.0, 64, 0.5);
  EXPECT_EQ(interaction_energy(a, TorusConfig::empty(2, 4.0, 64), power_cutoff(0.0, 2)), 0.0);
  EXPECT_THROW(interaction_energy(a, a, power_cutoff(0.0, 2)), PreconditionError);
  EXPECT_THROW(interaction_energy(a, TorusConfig::empty(2, 4.0, 32), power_cutoff(0.0, 2)), PreconditionError);
}

TEST(Interaction, TwoBallsAgainstImageSum)
{
  const double ell = 16.0, rho = 0.5, q = 4.0;
  const int n = 256;
  auto a = make_balls(2, ell, n, rho, {{6.0, 8.0, 0.0}});
  auto b = make_balls(2, ell, n, rho, {{10.0, 8.0, 0.0}});
  double got = interaction_energy(a, b, power_cutoff(0.0, 2));
  const double h = ell / n;
  double area_a = a.occupied_count() * h * h, area_b = b.occupied_count() * h * h;
  double images = 0.0;
  for (int i = -300; i <= 300; ++i)
    for (int j = -300; j <= 300; ++j)
      images += two_ball_interaction(rho, std::hypot(q + ell * i, ell * j), 2);
  double expect = 2.0 * area_a * area_b * images / (ell * ell);
  EXPECT_NEAR(got, expect, 0.01 * expect);
}

TEST(Interaction, RandomDisjointPairsNonnegative)
{
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 50; ++t) {
    auto base = make_random(2, 4.0, 32, 0.4, rng());
    auto u1 = TorusConfig::empty(2, 4.0, 32), u2 = u1;
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < base.cell_count(); ++i)
      if (base.occupied(i)) (coin(rng) ? u1 : u2).set(i, true);
    double eps = t % 2 ? 0.0 : 0.2;
    EXPECT_GE(interaction_energy(u1, u2, power_cutoff(eps, 2)), 0.0) << t;
  }
}

TEST(Interaction, MatchesEnergyDifference)
{
  auto k = power_cutoff(0.25, 2);
  auto u1 = make_balls(2, 4.0, 128, 0.5, {{1.0, 2.0, 0.0}});
  auto u2 = make_balls(2, 4.0, 128, 0.5, {{2.75, 2.0, 0.0}});
  auto both = u1;
  for (std::size_t i = 0; i < u2.cell_count(); ++i)
    if (u2.occupied(i)) both.set(i, true);
  auto E = [&](const TorusConfig& c) { return energy_radial(autocorrelation_fft(c).radial, k).value; };
  double diff = E(both) - E(u1) - E(u2);
  double inter = interaction_energy(u1, u2, k);
  EXPECT_GT(inter, 0.0);
  EXPECT_NEAR(diff, inter, 0.05 * inter);
}

TEST(Bounds, LowerBoundExamples)
{
  auto stripes = lower_bound_check(optimal_half_stripes(), power_cutoff(0.0, 2));
  EXPECT_NEAR(stripes.rhs, -oracle::pi, 1e-14);
  EXPECT_NEAR(stripes.lhs, -2.0 * kE / oracle::pi, 1e-7);
  EXPECT_TRUE(stripes.ok);
  auto empty = lower_bound_check(autocorrelation_fft(TorusConfig::empty(2, 4.0, 32)).radial, power_cutoff(0.0, 2));
  EXPECT_EQ(empty.lhs, 0.0);
  EXPECT_EQ(empty.rhs, 0.0);
  EXPECT_TRUE(empty.ok);
}

TEST(Bounds, BvBoundExamples)
{
  auto empty = bv_bound_check(TorusConfig::empty(2, 4.0, 32), power_cutoff(0.1, 2));
  EXPECT_EQ(empty.lhs, 0.0);
  EXPECT_NEAR(empty.rhs, 0.0, 1e-15);
  EXPECT_TRUE(empty.ok);
  auto ball = bv_bound_check(make_ball(2, 8.0, 256, 1.0), power_cutoff(0.1, 2));
  EXPECT_TRUE(ball.ok);
  EXPECT_GT(ball.rhs - ball.lhs, 0.0);
  EXPECT_TRUE(bv_bound_check(optimal_half_stripes(), power_cutoff(0.1, 2)).ok);
  EXPECT_THROW(bv_bound_check(optimal_half_stripes(), power_cutoff(0.5, 2)), PreconditionError);
  EXPECT_THROW(bv_bound_check(optimal_half_stripes(), fractional_shift(0.1, 2)), ParameterError);
}

TEST(Sweep, StripesExactBelowWidth)
{
  auto rad = stripe_autocorrelation({2, 0.5, 0.5});
  auto res = epsilon_sweep(rad, power_cutoff(0.0, 2), {0.25, 0.1});
  for (const auto& p : res.points)
    EXPECT_NEAR(p.report.value, res.limit.value, p.report.quadrature_error + res.limit.quadrature_error + 1e-12);
  EXPECT_TRUE(std::isnan(res.rate));
}

TEST(Sweep, BallGapIsQuadratic)
{
  auto res = epsilon_sweep(ball_autocorrelation(1.0, 8.0, 2), power_cutoff(0.0, 2), {0.2, 0.1, 0.05});
  EXPECT_NEAR(res.rate, 2.0, 0.1);
  for (const auto& p : res.points) EXPECT_LT(p.report.value, res.limit.value);
}

TEST(Sweep, CutoffAtOneKillsNearField)
{
  auto rep = energy_radial(ball_autocorrelation(1.0, 8.0, 2), power_cutoff(1.0, 2));
  EXPECT_EQ(rep.near_field, 0.0);
}

TEST(Sweep, BadEpsilonLists)
{
  auto rad = ball_autocorrelation(1.0, 8.0, 2);
  EXPECT_THROW(epsilon_sweep(rad, power_cutoff(0.0, 2), {}), ParameterError);
  EXPECT_THROW(epsilon_sweep(rad, power_cutoff(0.0, 2), {0.1, 0.2}), ParameterError);
  EXPECT_THROW(epsilon_sweep(rad, power_cutoff(0.0, 2), {0.1, 0.0}), ParameterError);
}

TEST(Davila, FractionalShiftBall)
{
  auto res = davila_limit(ball_autocorrelation(1.0, 8.0, 2), fractional_shift(0.0, 2), {1e-1, 1e-2, 1e-3});
  EXPECT_NEAR(res.limit, 2.0 * oracle::pi / 64.0, 1e-15);
  EXPECT_NEAR(res.points.back().ratio, res.limit, 0.02 * res.limit);
}

TEST(Davila, PowerCutoffBallApproachesSlowly)
{
  // the gap decays like 1/ln(1/eps)
  auto res = davila_limit(ball_autocorrelation(1.0, 8.0, 2), power_cutoff(0.0, 2), {1e-2, 1e-4, 1e-8});
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& p : res.points) {
    double gap = p.ratio - res.limit;
    EXPECT_GT(gap, 0.0);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  double g4 = (res.points[1].ratio - res.limit) * std::log(1e4);
  double g8 = (res.points[2].ratio - res.limit) * std::log(1e8);
  EXPECT_NEAR(g8 / g4, 1.0, 0.1);
}

TEST(Davila, StripesAndFullTorus)
{
  StripePattern p{2, 0.3, 0.5};
  auto res = davila_limit(stripe_autocorrelation(p), fractional_shift(0.0, 2), {1e-2, 1e-3, 1e-4});
  EXPECT_NEAR(res.limit, 2.0 / p.period(), 1e-14);
  EXPECT_NEAR(res.points.back().ratio, res.limit, 0.01 * res.limit);
  auto full = autocorrelation_fft(TorusConfig::empty(2, 4.0, 32).complement()).radial;
  for (const auto& pt : davila_limit(full, power_cutoff(0.0, 2), {0.1, 0.01}).points) EXPECT_NEAR(pt.ratio, 0.0, 1e-14);
}

TEST(Divergence, PartialSums)
{
  auto s = divergence_partial_sums({1000, 1000000});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_LT(s[0].energy_sum, s[1].energy_sum);
  EXPECT_GE(s[1].energy_sum - s[0].energy_sum, 0.6);
  EXPECT_LT(s[1].bv_sum, 2.2);
  long double e = 0.0, b = 0.0;
  for (long k = 2; k <= 1000000; ++k) {
    long double lk = std::log(static_cast<long double>(k)), r = 1.0L / (k * lk * lk);
    e += -std::log(r) * r;
    b += r;
  }
  EXPECT_NEAR(s[1].energy_sum, static_cast<double>(e), 1e-9);
  EXPECT_NEAR(s[1].bv_sum, static_cast<double>(b), 1e-12);
  EXPECT_THROW(divergence_partial_sums({1}), ParameterError);
  EXPECT_THROW(divergence_partial_sums({10, 5}), ParameterError);
}
