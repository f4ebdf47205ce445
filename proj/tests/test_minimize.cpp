#include <cmath>

#include <gtest/gtest.h>

#include <nlperim/minimize.hpp>

#include "oracles.hpp"

using namespace nlperim;

namespace {

// direct search over all half-cell centres, no FFT
double fraenkel_bruteforce(const TorusConfig& cfg)
{
  const int d = cfg.dimension(), n = cfg.cells_per_side();
  const double m = static_cast<double>(cfg.occupied_count());
  const double r = std::pow(m / ball_volume(d), 1.0 / d);
  double best = 1e300;
  const int M = 2 * n;
  for (int cx = 0; cx < M; ++cx)
    for (int cy = 0; cy < (d > 1 ? M : 1); ++cy) {
      double sym = 0.0;
      for (std::size_t i = 0; i < cfg.cell_count(); ++i) {
        auto c = cfg.coords(i);
        // cell i sits at integer coordinates; centre at (cx, cy) / 2
        double dx = std::remainder(c[0] - 0.5 * cx, double(n));
        double dy = d > 1 ? std::remainder(c[1] - 0.5 * cy, double(n)) : 0.0;
        bool in_ball = dx * dx + dy * dy <= r * r;
        sym += in_ball != cfg.occupied(i);
      }
      best = std::min(best, sym / m);
    }
  return best;
}

AnnealSchedule schedule(long steps, double t0 = 0.05)
{
  AnnealSchedule s;
  s.initial_temperature = t0;
  s.cooling_factor = 0.9995;
  s.steps = steps;
  s.refresh_every = 1000;
  return s;
}

} // namespace

TEST(Fraenkel, RasterizedBall)
{
  for (int n : {64, 128, 256}) {
    auto cfg = make_ball(2, 8.0, n, 1.5);
    double boundary = 0.0;
    for (std::size_t i = 0; i < cfg.cell_count(); ++i)
      if (cfg.occupied(i))
        for (int a = 0; a < 2; ++a)
          for (int s : {-1, 1})
            if (!cfg.occupied(cfg.neighbor(i, a, s))) {
              boundary += 1.0;
              goto next;
            }
    next:;
    EXPECT_LE(fraenkel_asymmetry(cfg), 2.0 * boundary / cfg.occupied_count()) << n;
  }
  EXPECT_LE(fraenkel_asymmetry(make_ball(2, 8.0, 256, 1.5)), fraenkel_asymmetry(make_ball(2, 8.0, 64, 1.5)));
  EXPECT_LT(fraenkel_asymmetry(make_ball(2, 8.0, 256, 1.5)), 0.05);
}

TEST(Fraenkel, BruteForceOracle)
{
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto cfg = make_random_cells(2, 1.0, 16, 30, seed);
    EXPECT_NEAR(fraenkel_asymmetry(cfg), fraenkel_bruteforce(cfg), 1e-12) << seed;
  }
  auto two = make_balls(2, 16.0, 16, 1.6, {{3.0, 8.0, 0.0}, {11.0, 8.0, 0.0}});
  EXPECT_NEAR(fraenkel_asymmetry(two), fraenkel_bruteforce(two), 1e-12);
  auto blob = make_ball_cells(2, 1.0, 16, 37);
  EXPECT_NEAR(fraenkel_asymmetry(blob), fraenkel_bruteforce(blob), 1e-12);
}

TEST(Fraenkel, TwoFarBalls)
{
  auto cfg = make_two_balls(2, 16.0, 128, 1.5, 8.0);
  EXPECT_GE(fraenkel_asymmetry(cfg), 0.5);
}

TEST(Fraenkel, TotalAndEmpty)
{
  auto full = TorusConfig::empty(2, 1.0, 16).complement();
  double a = fraenkel_asymmetry(full);
  EXPECT_GE(a, 0.0);
  EXPECT_LE(a, 2.0);
  EXPECT_THROW(fraenkel_asymmetry(TorusConfig::empty(2, 1.0, 16)), DomainError);
}

TEST(Deficit, RasterizedBall) { EXPECT_LE(std::abs(isoperimetric_deficit(make_ball(2, 8.0, 512, 1.0))), 0.05); }

TEST(Deficit, StripesClosedForm)
{
  for (int count : {1, 2}) {
    auto cfg = make_stripes(2, 8.0, 256, count, 0.5);
    double per = 2.0 * 8.0 * count, area = 32.0;
    double expect = per / (2.0 * oracle::pi * std::sqrt(area / oracle::pi)) - 1.0;
    EXPECT_NEAR(isoperimetric_deficit(cfg), expect, 1e-9) << count;
  }
}

TEST(Deficit, SingleCellAndEmpty)
{
  auto cfg = TorusConfig::empty(2, 1.0, 32);
  cfg.set(100, true);
  // a square has perimeter 4/sqrt(pi) times the disk's
  EXPECT_GE(isoperimetric_deficit(cfg), 0.0);
  EXPECT_THROW(isoperimetric_deficit(TorusConfig::empty(2, 1.0, 32)), DomainError);
}

TEST(BallCells, CountAndShape)
{
  for (std::size_t m : {1u, 13u, 120u, 500u}) {
    auto cfg = make_ball_cells(2, 8.0, 64, m);
    EXPECT_EQ(cfg.occupied_count(), m);
  }
  EXPECT_LT(fraenkel_asymmetry(make_ball_cells(2, 8.0, 64, 500)), 0.05);
  EXPECT_THROW(make_ball_cells(2, 1.0, 4, 17), ParameterError);
}

TEST(GridEnergy, MoveDeltaMatchesRecompute)
{
  auto k = power_cutoff(0.25, 2);
  auto cfg = make_random_cells(2, 8.0, 32, 60, 9);
  GridEnergy ge(2, 32, 8.0, k);
  auto phi = ge.potential(cfg);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::size_t> occ, emp;
    for (std::size_t i = 0; i < cfg.cell_count(); ++i) (cfg.occupied(i) ? occ : emp).push_back(i);
    std::size_t a = occ[rng() % occ.size()], b = emp[rng() % emp.size()];
    double before = ge.energy(cfg);
    double delta = ge.move_delta(phi, a, b);
    ge.apply_move(phi, a, b);
    cfg.set(a, false);
    cfg.set(b, true);
    double after = ge.energy(cfg);
    EXPECT_NEAR(delta, after - before, 1e-12);
    auto fresh = ge.potential(cfg);
    for (std::size_t i = 0; i < phi.size(); i += 37) EXPECT_NEAR(phi[i], fresh[i], 1e-9);
  }
}

TEST(GridEnergy, CloseToRadialEnergy)
{
  auto k = power_cutoff(0.25, 2);
  auto cfg = make_ball(2, 8.0, 128, 1.2);
  GridEnergy ge(2, 128, 8.0, k);
  double radial = energy_radial(autocorrelation_fft(cfg).radial, k).value;
  EXPECT_NEAR(ge.energy(cfg), radial, 0.02 * std::abs(radial));
  EXPECT_THROW(GridEnergy(2, 32, 8.0, power_cutoff(0.0, 2)), ParameterError);
}

TEST(Anneal, ZeroStepsUnchanged)
{
  auto ball = make_ball(2, 8.0, 64, 1.0);
  auto st = anneal(ball, power_cutoff(0.25, 2), schedule(0), 1);
  EXPECT_EQ(st.config, ball);
  EXPECT_EQ(st.best_config, ball);
  EXPECT_EQ(st.step_count, 0);
  EXPECT_EQ(st.energy, st.best_energy);
}

TEST(Anneal, VolumeDeterminismMonotoneBest)
{
  auto init = make_random_cells(2, 8.0, 32, 40, 5);
  auto s = schedule(20000);
  s.log_every = 500;
  auto a = anneal(init, power_cutoff(0.5, 2), s, 42);
  auto b = anneal(init, power_cutoff(0.5, 2), s, 42);
  EXPECT_EQ(a.config, b.config);
  EXPECT_EQ(a.best_energy, b.best_energy);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.config.occupied_count(), 40u);
  EXPECT_EQ(a.best_config.occupied_count(), 40u);
  EXPECT_GT(a.accepted, 0);
  ASSERT_EQ(a.trajectory.size(), 41u);
  for (std::size_t i = 1; i < a.trajectory.size(); ++i)
    EXPECT_LE(a.trajectory[i].best_energy, a.trajectory[i - 1].best_energy);
  EXPECT_LE(a.max_refresh_drift, 1e-6);
  EXPECT_LT(a.best_energy, GridEnergy(2, 32, 8.0, power_cutoff(0.5, 2)).energy(init));
  auto c = anneal(init, power_cutoff(0.5, 2), s, 43);
  EXPECT_NE(c.accepted, a.accepted);
}

TEST(Anneal, UniformMovesConserveVolume)
{
  auto init = make_random_cells(2, 8.0, 32, 40, 6);
  auto s = schedule(5000);
  s.uniform_moves = true;
  auto st = anneal(init, power_cutoff(0.5, 2), s, 1);
  EXPECT_EQ(st.config.occupied_count(), 40u);
  EXPECT_LE(st.max_refresh_drift, 1e-6);
}

TEST(Anneal, ScheduleErrors)
{
  auto init = make_random_cells(2, 8.0, 32, 40, 5);
  auto k = power_cutoff(0.5, 2);
  for (double c : {0.0, 1.0, 1.5, -0.5}) {
    auto s = schedule(10);
    s.cooling_factor = c;
    EXPECT_THROW(anneal(init, k, s, 1), ParameterError) << c;
  }
  auto s = schedule(10);
  s.initial_temperature = 0.0;
  EXPECT_THROW(anneal(init, k, s, 1), ParameterError);
  EXPECT_THROW(anneal(init, power_cutoff(0.0, 2), schedule(10), 1), ParameterError);
  EXPECT_THROW(anneal(init, power_cutoff(0.5, 3), schedule(10), 1), ParameterError);
}

TEST(Anneal, TrajectoryCsv)
{
  auto s = schedule(2000);
  s.log_every = 1000;
  auto st = anneal(make_random_cells(2, 8.0, 32, 40, 5), power_cutoff(0.5, 2), s, 7);
  std::ostringstream os;
  write_trajectory_csv(os, st);
  std::string text = os.str();
  EXPECT_EQ(text.rfind("step,temperature,energy,best_energy,asymmetry\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(text.find('\r'), std::string::npos);
}
