#ifndef NLPERIM_TORUS_HPP
#define NLPERIM_TORUS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"

namespace nlperim {

/// Binary occupancy on the torus [0, ell)^d with n^d cubic cells, row-major.
class TorusConfig {
 public:
  TorusConfig() = default;

  TorusConfig(int d, double ell, int n, std::vector<std::uint8_t> occupancy)
      : d_(d), ell_(ell), n_(n), occ_(std::move(occupancy))
  {
    if (d < 1 || d > 3) throw ConfigurationError("torus dimension must be 1, 2 or 3");
    if (!(ell > 0.0) || !std::isfinite(ell)) throw ConfigurationError("side length must be > 0");
    if (!is_power_of_two(n)) throw ConfigurationError("cells per side must be a power of two");
    if (occ_.size() != cell_count()) throw ConfigurationError("occupancy size does not match n^d");
    for (auto& v : occ_) v = v ? 1 : 0;
  }

  static TorusConfig empty(int d, double ell, int n)
  {
    std::size_t N = 1;
    for (int i = 0; i < d; ++i) N *= static_cast<std::size_t>(n);
    return TorusConfig(d, ell, n, std::vector<std::uint8_t>(N, 0));
  }

  int dimension() const { return d_; }
  double side_length() const { return ell_; }
  int cells_per_side() const { return n_; }
  double cell_size() const { return ell_ / n_; }
  double volume() const { return std::pow(ell_, d_); }
  std::size_t cell_count() const
  {
    std::size_t N = 1;
    for (int i = 0; i < d_; ++i) N *= static_cast<std::size_t>(n_);
    return N;
  }

  const std::vector<std::uint8_t>& occupancy() const { return occ_; }
  bool occupied(std::size_t idx) const { return occ_[idx] != 0; }
  void set(std::size_t idx, bool v) { occ_[idx] = v ? 1 : 0; }

  std::size_t occupied_count() const
  {
    std::size_t c = 0;
    for (auto v : occ_) c += v;
    return c;
  }
  double volume_fraction() const { return static_cast<double>(occupied_count()) / cell_count(); }

  std::array<int, 3> coords(std::size_t idx) const
  {
    std::array<int, 3> c{0, 0, 0};
    for (int i = d_ - 1; i >= 0; --i) {
      c[i] = static_cast<int>(idx % n_);
      idx /= n_;
    }
    return c;
  }

  std::size_t index(std::array<int, 3> c) const
  {
    std::size_t idx = 0;
    for (int i = 0; i < d_; ++i) idx = idx * n_ + static_cast<std::size_t>(((c[i] % n_) + n_) % n_);
    return idx;
  }

  /// neighbor across the face in direction `axis`, sign +-1
  std::size_t neighbor(std::size_t idx, int axis, int sign) const
  {
    auto c = coords(idx);
    c[axis] += sign;
    return index(c);
  }

  /// number of cell faces normal to `axis` separating occupied from empty cells
  std::size_t interface_faces(int axis) const
  {
    std::size_t f = 0;
    for (std::size_t i = 0; i < occ_.size(); ++i)
      if (occ_[i] != occ_[neighbor(i, axis, 1)]) ++f;
    return f;
  }

  /// counted faces times face area (grid-aligned BV norm)
  double grid_perimeter() const
  {
    std::size_t f = 0;
    for (int a = 0; a < d_; ++a) f += interface_faces(a);
    return static_cast<double>(f) * std::pow(cell_size(), d_ - 1);
  }

  TorusConfig complement() const
  {
    auto o = occ_;
    for (auto& v : o) v = 1 - v;
    return TorusConfig(d_, ell_, n_, std::move(o));
  }

  TorusConfig shifted(std::array<int, 3> s) const
  {
    std::vector<std::uint8_t> o(occ_.size());
    for (std::size_t i = 0; i < occ_.size(); ++i) {
      auto c = coords(i);
      for (int a = 0; a < d_; ++a) c[a] += s[a];
      o[index(c)] = occ_[i];
    }
    return TorusConfig(d_, ell_, n_, std::move(o));
  }

  std::vector<double> as_doubles() const { return std::vector<double>(occ_.begin(), occ_.end()); }

  bool operator==(const TorusConfig& o) const
  {
    return d_ == o.d_ && ell_ == o.ell_ && n_ == o.n_ && occ_ == o.occ_;
  }

 private:
  int d_ = 1;
  double ell_ = 1.0;
  int n_ = 1;
  std::vector<std::uint8_t> occ_;
};

/// "b:len,len,..." with b the value of the first run; runs alternate
inline std::string encode_rle(const std::vector<std::uint8_t>& occ)
{
  std::ostringstream os;
  if (occ.empty()) return "0:";
  os << int(occ[0]) << ':';
  std::size_t run = 0;
  std::uint8_t cur = occ[0];
  bool first = true;
  for (auto v : occ) {
    if (v == cur) {
      ++run;
      continue;
    }
    os << (first ? "" : ",") << run;
    first = false;
    cur = v;
    run = 1;
  }
  os << (first ? "" : ",") << run;
  return os.str();
}

inline std::vector<std::uint8_t> decode_rle(const std::string& s, std::size_t expected)
{
  auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0) throw ConfigurationError("bad occupancy_rle: missing 'b:' prefix");
  std::string head = s.substr(0, colon);
  if (head != "0" && head != "1") throw ConfigurationError("bad occupancy_rle: first bit must be 0 or 1");
  std::uint8_t cur = head == "1";
  std::vector<std::uint8_t> out;
  out.reserve(expected);
  std::stringstream ss(s.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw ConfigurationError("bad occupancy_rle run '" + tok + "'");
    std::size_t len = std::stoull(tok);
    if (out.size() + len > expected) throw ConfigurationError("occupancy_rle longer than n^d");
    out.insert(out.end(), len, cur);
    cur = 1 - cur;
  }
  if (out.size() != expected) throw ConfigurationError("occupancy_rle shorter than n^d");
  return out;
}

// ---- named patterns -------------------------------------------------------

inline double periodic_delta(double a, double b, double ell)
{
  double t = std::fmod(a - b, ell);
  if (t < -0.5 * ell) t += ell;
  if (t > 0.5 * ell) t -= ell;
  return t;
}

/// union of balls (periodic distance), cells whose centers fall inside
inline TorusConfig make_balls(int d, double ell, int n, double radius, const std::vector<std::array<double, 3>>& centers)
{
  auto cfg = TorusConfig::empty(d, ell, n);
  const double h = ell / n;
  for (std::size_t i = 0; i < cfg.cell_count(); ++i) {
    auto c = cfg.coords(i);
    for (const auto& ctr : centers) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        double t = periodic_delta((c[a] + 0.5) * h, ctr[a], ell);
        r2 += t * t;
      }
      if (r2 <= radius * radius) {
        cfg.set(i, true);
        break;
      }
    }
  }
  return cfg;
}

inline TorusConfig make_ball(int d, double ell, int n, double radius)
{
  return make_balls(d, ell, n, radius, {{0.5 * ell, 0.5 * ell, 0.5 * ell}});
}

/// two balls at distance `separation` along the first axis
inline TorusConfig make_two_balls(int d, double ell, int n, double radius, double separation)
{
  double c0 = 0.5 * ell - 0.5 * separation;
  return make_balls(d, ell, n, radius,
                    {{c0, 0.5 * ell, 0.5 * ell}, {c0 + separation, 0.5 * ell, 0.5 * ell}});
}

/// `count` stripes normal to the first axis, each of width fraction*ell/count
inline TorusConfig make_stripes(int d, double ell, int n, int count, double fraction)
{
  if (count < 1) throw ParameterError("stripe count must be >= 1");
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParameterError("stripe fraction must lie in [0,1]");
  auto cfg = TorusConfig::empty(d, ell, n);
  const double h = ell / n, a = ell / count, w = fraction * a;
  for (std::size_t i = 0; i < cfg.cell_count(); ++i) {
    double x = (cfg.coords(i)[0] + 0.5) * h;
    double y = std::fmod(x, a);
    if (y < w) cfg.set(i, true);
  }
  return cfg;
}

/// iid Bernoulli(fraction) cells, deterministic for a seed
inline TorusConfig make_random(int d, double ell, int n, double fraction, std::uint64_t seed)
{
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParameterError("random fraction must lie in [0,1]");
  auto cfg = TorusConfig::empty(d, ell, n);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(fraction);
  for (std::size_t i = 0; i < cfg.cell_count(); ++i) cfg.set(i, coin(rng));
  return cfg;
}

/// exactly `count` cells chosen uniformly, deterministic for a seed
inline TorusConfig make_random_cells(int d, double ell, int n, std::size_t count, std::uint64_t seed)
{
  auto cfg = TorusConfig::empty(d, ell, n);
  if (count > cfg.cell_count()) throw ParameterError("more cells requested than the grid holds");
  std::vector<std::size_t> all(cfg.cell_count());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> pick;
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(pick), count, rng);
  for (auto i : pick) cfg.set(i, true);
  return cfg;
}

/// the `count` cells closest to the torus center, ties by index
inline TorusConfig make_ball_cells(int d, double ell, int n, std::size_t count)
{
  auto cfg = TorusConfig::empty(d, ell, n);
  if (count > cfg.cell_count()) throw ParameterError("more cells requested than the grid holds");
  std::vector<std::pair<double, std::size_t>> dist(cfg.cell_count());
  for (std::size_t i = 0; i < cfg.cell_count(); ++i) {
    auto c = cfg.coords(i);
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += (c[a] + 0.5 - 0.5 * n) * (c[a] + 0.5 - 0.5 * n);
    dist[i] = {r2, i};
  }
  std::stable_sort(dist.begin(), dist.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t j = 0; j < count; ++j) cfg.set(dist[j].second, true);
  return cfg;
}

} // namespace nlperim

#endif
