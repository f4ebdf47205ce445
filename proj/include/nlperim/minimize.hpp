#ifndef NLPERIM_MINIMIZE_HPP
#define NLPERIM_MINIMIZE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <vector>

#include "autocorr.hpp"
#include "constants.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "kernels.hpp"
#include "torus.hpp"

namespace nlperim {

// ---------------------------------------------------------------- shape metrics

/// min over centres on the half-cell grid of |Omega xor B| / |B|, |B| = |Omega|
inline double fraenkel_asymmetry(const TorusConfig& cfg)
{
  const std::size_t m = cfg.occupied_count();
  if (m == 0) throw DomainError("fraenkel_asymmetry: empty configuration");
  const int d = cfg.dimension(), n = cfg.cells_per_side();
  const double r = std::pow(m / ball_volume(d), 1.0 / d);  // cell units
  const long R = static_cast<long>(std::ceil(r + 1.0));
  RealFft fft(d, n);
  const auto u = cfg.as_doubles();
  const auto U = fft.forward(u);
  const double N = static_cast<double>(cfg.cell_count());
  double best = std::numeric_limits<double>::infinity();
  for (int parity = 0; parity < (1 << d); ++parity) {
    std::array<double, 3> shift{0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) shift[i] = ((parity >> i) & 1) ? 0.5 : 0.0;
    std::vector<double> ball(cfg.cell_count(), 0.0);
    std::array<long, 3> o{0, 0, 0};
    for (o[0] = -R; o[0] <= R; ++o[0])
      for (o[1] = (d > 1 ? -R : 0); o[1] <= (d > 1 ? R : 0); ++o[1])
        for (o[2] = (d > 2 ? -R : 0); o[2] <= (d > 2 ? R : 0); ++o[2]) {
          double s2 = 0.0;
          for (int i = 0; i < d; ++i) s2 += (o[i] - shift[i]) * (o[i] - shift[i]);
          if (s2 <= r * r) ball[detail::wrap_index(o, d, n)] = 1.0;
        }
    double bsize = std::accumulate(ball.begin(), ball.end(), 0.0);
    // overlap[x] = sum_o ball(o) u(x + o)
    auto B = fft.forward(ball);
    for (std::size_t i = 0; i < B.size(); ++i) B[i] = std::conj(B[i]) * U[i];
    auto overlap = fft.backward(B);
    for (double v : overlap) {
      double inter = std::round(v / N);
      best = std::min(best, (static_cast<double>(m) + bsize - 2.0 * inter) / static_cast<double>(m));
    }
  }
  return std::clamp(best, 0.0, 2.0);
}

/// perimeter estimate over the perimeter of the equal-volume ball, minus one
inline double isoperimetric_deficit(const TorusConfig& cfg)
{
  const std::size_t m = cfg.occupied_count();
  if (m == 0) throw DomainError("isoperimetric_deficit: empty configuration");
  const int d = cfg.dimension();
  auto ac = autocorrelation_fft(cfg);
  double per = perimeter_estimate(ac.radial, cfg.volume()).value;
  double vol = m * std::pow(cfg.cell_size(), d);
  double r = std::pow(vol / ball_volume(d), 1.0 / d);
  return per / (sphere_area(d) * std::pow(r, d - 1)) - 1.0;
}

// ---------------------------------------------------------------- grid energy

/// Grid energy, linear in the autocorrelation:
///   E(u) = sum_{k != 0} W(k) (C(k) - C(0)) + (lambda^2 - lambda) tail - c'(0) sigma int_0^1 K r^{d-1} dr
/// with W the hat-function pair weights and c'(0) from slope_stencil. For fixed
/// volume this is sum_k omega(k) C(k) + const.
class GridEnergy {
 public:
  GridEnergy(int d, int n, double ell, const Kernel& k) : d_(d), n_(n), ell_(ell), fft_(d, n)
  {
    if (!(k.epsilon > 0.0)) throw ParameterError("grid energy needs a kernel with epsilon > 0");
    auto pw = pair_weights(d, n, ell, k);
    tail_ = pw.tail;
    const std::size_t N = pw.periodized.size();
    omega_.assign(N, 0.0);
    for (std::size_t i = 1; i < N; ++i) omega_[i] = pw.periodized[i];
    wsum_ = std::accumulate(omega_.begin(), omega_.end(), 0.0);
    auto st = slope_stencil(d, n, ell);
    const double mass = sphere_area(d) * radial_moment(k, d - 1, 0.0, 1.0);
    for (std::size_t j = 0; j < st.index.size(); ++j) {
      if (st.index[j] == 0) c0_coeff_ += mass * st.coeff[j];
      else omega_[st.index[j]] += mass * st.coeff[j];
    }
    // C(k) = C(-k): keep omega symmetric
    auto sym = omega_;
    std::array<long, 3> c{0, 0, 0};
    for (std::size_t i = 0; i < N; ++i) {
      std::size_t r = i;
      for (int a = d - 1; a >= 0; --a) {
        c[a] = static_cast<long>(r % n);
        r /= n;
      }
      std::array<long, 3> m{-c[0], -c[1], -c[2]};
      sym[i] = 0.5 * (omega_[i] + omega_[detail::wrap_index(m, d, n)]);
    }
    omega_ = std::move(sym);
  }

  std::size_t size() const { return omega_.size(); }
  const std::vector<double>& omega() const { return omega_; }

  /// phi(x) = sum_j omega(j) u(x + j)
  std::vector<double> potential(const TorusConfig& u) const { return fft_.correlate(omega_, u.as_doubles()); }

  double constant(double lambda) const
  {
    return (lambda * lambda - lambda) * tail_ - lambda * wsum_ + lambda * c0_coeff_;
  }

  /// energy from a potential computed for u
  double energy(const TorusConfig& u, const std::vector<double>& phi) const
  {
    NeumaierSum s;
    const auto& occ = u.occupancy();
    for (std::size_t i = 0; i < occ.size(); ++i)
      if (occ[i]) s.add(phi[i]);
    return constant(u.volume_fraction()) + s.value() / static_cast<double>(occ.size());
  }

  double energy(const TorusConfig& u) const { return energy(u, potential(u)); }

  /// change of energy when occupied cell a moves to empty cell b
  double move_delta(const std::vector<double>& phi, std::size_t a, std::size_t b) const
  {
    return 2.0 / static_cast<double>(omega_.size()) * (phi[b] - phi[a] - omega_[offset(a, b)]);
  }

  /// phi(x) += omega(b - x) - omega(a - x) after u(b) = 1, u(a) = 0
  void apply_move(std::vector<double>& phi, std::size_t a, std::size_t b) const
  {
    const std::size_t n = n_, mask = n_ - 1;
    std::array<std::size_t, 3> ca{0, 0, 0}, cb{0, 0, 0};
    for (int i = d_ - 1; i >= 0; --i) {
      ca[i] = a % n;
      cb[i] = b % n;
      a /= n;
      b /= n;
    }
    const std::size_t n1 = d_ > 1 ? n : 1, n2 = d_ > 2 ? n : 1;
    std::size_t x = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t ra = (ca[0] - i) & mask, rb = (cb[0] - i) & mask;
      for (std::size_t j = 0; j < n1; ++j) {
        std::size_t sa = ra * n1 + ((ca[1] - j) & mask) * (d_ > 1), sb = rb * n1 + ((cb[1] - j) & mask) * (d_ > 1);
        for (std::size_t k = 0; k < n2; ++k, ++x) {
          std::size_t ia = sa * n2 + ((ca[2] - k) & mask) * (d_ > 2), ib = sb * n2 + ((cb[2] - k) & mask) * (d_ > 2);
          phi[x] += omega_[ib] - omega_[ia];
        }
      }
    }
  }

  /// index of y - x on the torus
  std::size_t offset(std::size_t x, std::size_t y) const
  {
    std::size_t idx = 0, mul = 1;
    for (int a = 0; a < d_; ++a) {
      std::size_t xa = x % n_, ya = y % n_;
      x /= n_;
      y /= n_;
      idx += ((ya + n_ - xa) % n_) * mul;
      mul *= n_;
    }
    return idx;
  }

 private:
  int d_;
  std::size_t n_;
  double ell_;
  RealFft fft_;
  std::vector<double> omega_;
  double tail_ = 0.0, wsum_ = 0.0, c0_coeff_ = 0.0;
};

// ---------------------------------------------------------------- annealing

struct AnnealSchedule {
  double initial_temperature = 1e-3;
  double cooling_factor = 0.99995;
  long steps = 0;
  long refresh_every = 1000;
  long log_every = 0;  // 0: no trajectory
  bool uniform_moves = false;

  void validate() const
  {
    if (!(cooling_factor > 0.0 && cooling_factor < 1.0)) throw ParameterError("cooling factor must lie in (0,1)");
    if (!(initial_temperature > 0.0)) throw ParameterError("initial temperature must be > 0");
    if (steps < 0) throw ParameterError("steps must be >= 0");
    if (refresh_every < 1) throw ParameterError("refresh interval must be >= 1");
    if (log_every < 0) throw ParameterError("log interval must be >= 0");
  }
};

struct TrajectoryRow {
  long step = 0;
  double temperature = 0.0;
  double energy = 0.0;
  double best_energy = 0.0;
  double asymmetry = 0.0;
};

struct AnnealState {
  TorusConfig config;
  double energy = 0.0;
  TorusConfig best_config;
  double best_energy = 0.0;
  double temperature = 0.0;
  std::uint64_t rng_seed = 0;
  long step_count = 0;
  long accepted = 0;
  double max_refresh_drift = 0.0;  // max |incremental - full| / |full| at refreshes
  std::vector<TrajectoryRow> trajectory;
};

namespace detail {

/// vector with O(1) insert, erase and uniform pick
class IndexSet {
 public:
  explicit IndexSet(std::size_t universe) : pos_(universe, npos) {}
  bool contains(std::size_t i) const { return pos_[i] != npos; }
  void insert(std::size_t i)
  {
    if (contains(i)) return;
    pos_[i] = items_.size();
    items_.push_back(i);
  }
  void erase(std::size_t i)
  {
    if (!contains(i)) return;
    std::size_t p = pos_[i], last = items_.back();
    items_[p] = last;
    pos_[last] = p;
    items_.pop_back();
    pos_[i] = npos;
  }
  std::size_t size() const { return items_.size(); }
  std::size_t operator[](std::size_t k) const { return items_[k]; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> items_;
  std::vector<std::size_t> pos_;
};

} // namespace detail

/// Metropolis annealing at fixed volume with single-cell moves. The acceptance
/// test uses the total energy |T| E. Deterministic for a given seed.
inline AnnealState anneal(const TorusConfig& initial, const Kernel& k, const AnnealSchedule& schedule,
                          std::uint64_t seed)
{
  schedule.validate();
  k.validate();
  if (k.dimension != initial.dimension()) throw ParameterError("kernel dimension does not match the torus");
  const int d = initial.dimension();
  const std::size_t N = initial.cell_count();
  GridEnergy ge(d, initial.cells_per_side(), initial.side_length(), k);

  AnnealState st;
  st.config = initial;
  st.rng_seed = seed;
  st.temperature = schedule.initial_temperature;
  auto phi = ge.potential(st.config);
  st.energy = ge.energy(st.config, phi);
  st.best_config = st.config;
  st.best_energy = st.energy;

  const std::size_t m = initial.occupied_count();
  auto log_row = [&](long step) {
    TrajectoryRow row{step, st.temperature, st.energy, st.best_energy,
                      m > 0 ? fraenkel_asymmetry(st.config) : 0.0};
    st.trajectory.push_back(row);
  };
  if (schedule.log_every > 0) log_row(0);
  if (m == 0 || m == N || schedule.steps == 0) return st;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto pick = [&](const detail::IndexSet& s) {
    return s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)];
  };

  auto& cfg = st.config;
  auto has_neighbor = [&](std::size_t i, bool value) {
    for (int a = 0; a < d; ++a)
      for (int sgn : {-1, 1})
        if (cfg.occupied(cfg.neighbor(i, a, sgn)) == value) return true;
    return false;
  };
  // candidate sources (occupied) and targets (empty)
  detail::IndexSet src(N), dst(N);
  auto classify = [&](std::size_t i) {
    src.erase(i);
    dst.erase(i);
    if (cfg.occupied(i)) {
      if (schedule.uniform_moves || has_neighbor(i, false)) src.insert(i);
    } else {
      if (schedule.uniform_moves || has_neighbor(i, true)) dst.insert(i);
    }
  };
  for (std::size_t i = 0; i < N; ++i) classify(i);

  const double scale = initial.volume();
  double since_refresh = 0;
  for (long step = 1; step <= schedule.steps; ++step) {
    st.step_count = step;
    if (src.size() > 0 && dst.size() > 0) {
      std::size_t a = pick(src), b = pick(dst);
      double dE = ge.move_delta(phi, a, b);
      bool accept = dE <= 0.0 || unif(rng) < std::exp(-scale * dE / st.temperature);
      if (accept) {
        ge.apply_move(phi, a, b);
        cfg.set(a, false);
        cfg.set(b, true);
        st.energy += dE;
        ++st.accepted;
        for (std::size_t c : {a, b}) {
          classify(c);
          for (int ax = 0; ax < d; ++ax)
            for (int sgn : {-1, 1}) classify(cfg.neighbor(c, ax, sgn));
        }
        if (st.energy < st.best_energy) {
          st.best_energy = st.energy;
          st.best_config = cfg;
        }
      }
    }
    if (++since_refresh >= schedule.refresh_every) {
      since_refresh = 0;
      phi = ge.potential(cfg);
      double full = ge.energy(cfg, phi);
      double drift = std::abs(full - st.energy) / std::max(std::abs(full), 1e-300);
      st.max_refresh_drift = std::max(st.max_refresh_drift, drift);
      st.energy = full;
      if (st.energy < st.best_energy) {
        st.best_energy = st.energy;
        st.best_config = cfg;
      }
    }
    st.temperature *= schedule.cooling_factor;
    if (schedule.log_every > 0 && step % schedule.log_every == 0) log_row(step);
  }
  return st;
}

inline void write_trajectory_csv(std::ostream& os, const AnnealState& st)
{
  os << "step,temperature,energy,best_energy,asymmetry\n";
  os.precision(12);
  for (const auto& r : st.trajectory)
    os << r.step << ',' << r.temperature << ',' << r.energy << ',' << r.best_energy << ',' << r.asymmetry << '\n';
}

} // namespace nlperim

#endif
