#ifndef NLPERIM_IO_HPP
#define NLPERIM_IO_HPP

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <regex>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "energy.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "minimize.hpp"
#include "patterns.hpp"
#include "torus.hpp"

namespace nlperim {

using json = nlohmann::json;

/// 12 significant digits; non-finite values become null
inline json num(double x)
{
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

inline void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what)
{
  if (!j.is_object()) throw ConfigurationError(what + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw ConfigurationError(what + ": unknown key '" + key + "'");
}

template <class T>
T get_required(const json& j, const char* key, const std::string& what)
{
  if (!j.contains(key)) throw ConfigurationError(what + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigurationError(what + ": bad value for '" + key + "'");
  }
}

template <class T>
T get_optional(const json& j, const char* key, T fallback, const std::string& what)
{
  if (!j.contains(key)) return fallback;
  return get_required<T>(j, key, what);
}

// ---- kernel -------------------------------------------------------------------

inline json to_json(const Kernel& k)
{
  json j{{"family", family_name(k.family)}, {"epsilon", num(k.epsilon)}, {"d", k.dimension}};
  if (k.family == KernelFamily::SuperCritical) j["q"] = num(k.q);
  return j;
}

inline Kernel kernel_from_json(const json& j)
{
  require_keys(j, {"family", "epsilon", "d", "q"}, "kernel");
  Kernel k;
  k.family = family_from_name(get_required<std::string>(j, "family", "kernel"));
  k.epsilon = get_required<double>(j, "epsilon", "kernel");
  k.dimension = get_required<int>(j, "d", "kernel");
  k.q = get_optional<double>(j, "q", 0.0, "kernel");
  k.validate();
  return k;
}

// ---- torus --------------------------------------------------------------------

inline json to_json(const TorusConfig& c)
{
  return {{"d", c.dimension()}, {"ell", c.side_length()}, {"n", c.cells_per_side()},
          {"occupancy_rle", encode_rle(c.occupancy())}};
}

/// Either an explicit configuration ({"d","ell","n","occupancy_rle"}) or a named
/// pattern ({"d","ell","n","pattern", ...}) with pattern one of "ball", "ball_cells",
/// "stripes", "two_balls", "random(seed)", "random_cells(seed)".
inline TorusConfig torus_from_json(const json& j)
{
  const std::string what = "torus";
  require_keys(j, {"d", "ell", "n", "occupancy_rle", "pattern", "radius", "separation", "count", "fraction"}, what);
  const int d = get_required<int>(j, "d", what);
  const double ell = get_required<double>(j, "ell", what);
  const int n = get_required<int>(j, "n", what);
  if (j.contains("occupancy_rle")) {
    if (j.contains("pattern")) throw ConfigurationError("torus: give either occupancy_rle or pattern");
    std::size_t N = 1;
    for (int i = 0; i < d; ++i) N *= static_cast<std::size_t>(n);
    return TorusConfig(d, ell, n, decode_rle(get_required<std::string>(j, "occupancy_rle", what), N));
  }
  const std::string pat = get_required<std::string>(j, "pattern", what);
  std::smatch m;
  static const std::regex seeded(R"((random|random_cells)\((\d+)\))");
  if (pat == "ball") return make_ball(d, ell, n, get_required<double>(j, "radius", what));
  if (pat == "ball_cells") return make_ball_cells(d, ell, n, get_required<std::size_t>(j, "count", what));
  if (pat == "two_balls")
    return make_two_balls(d, ell, n, get_required<double>(j, "radius", what),
                          get_required<double>(j, "separation", what));
  if (pat == "stripes")
    return make_stripes(d, ell, n, get_required<int>(j, "count", what), get_required<double>(j, "fraction", what));
  if (std::regex_match(pat, m, seeded)) {
    std::uint64_t seed = std::stoull(m[2].str());
    if (m[1] == "random") return make_random(d, ell, n, get_required<double>(j, "fraction", what), seed);
    return make_random_cells(d, ell, n, get_required<std::size_t>(j, "count", what), seed);
  }
  throw ConfigurationError("torus: unknown pattern '" + pat + "'");
}

// ---- results ------------------------------------------------------------------

inline json to_json(const EnergyReport& r)
{
  json j{{"value", num(r.value)},
         {"near_field", num(r.near_field)},
         {"far_field", num(r.far_field)},
         {"truncation_correction", num(r.truncation_correction)},
         {"quadrature_error", num(r.quadrature_error)},
         {"kernel", to_json(r.kernel)},
         {"truncation_radius", num(r.truncation_radius)},
         {"divergent", r.divergent}};
  if (r.mesh_radius > 0.0) j["mesh_radius"] = num(r.mesh_radius);
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

inline json to_json(const BallLatticeEnergy& e)
{
  return {{"value", num(e.value)}, {"self_energy", num(e.self_energy)}, {"interaction", num(e.interaction)},
          {"error", num(e.error)}, {"fraction", num(e.fraction)}};
}

inline json to_json(const BravaisLattice& L)
{
  json rows = json::array();
  for (const auto& b : L.basis) {
    json r = json::array();
    for (int i = 0; i < L.dimension; ++i) r.push_back(b[i]);
    rows.push_back(r);
  }
  return {{"name", L.name}, {"basis", rows}};
}

/// a lattice name or {"name": ..., "basis": [[...], ...]}
inline BravaisLattice lattice_from_json(const json& j)
{
  if (j.is_string()) return named_lattice(j.get<std::string>());
  require_keys(j, {"name", "basis"}, "lattice");
  auto rows = get_required<std::vector<std::vector<double>>>(j, "basis", "lattice");
  return BravaisLattice::from_rows(rows, get_optional<std::string>(j, "name", "custom", "lattice"));
}

// ---- annealing manifest -------------------------------------------------------

struct AnnealManifest {
  TorusConfig initial;
  Kernel kernel;
  AnnealSchedule schedule;
  std::uint64_t seed = 0;
};

inline json to_json(const AnnealSchedule& s)
{
  return {{"initial_temperature", s.initial_temperature}, {"cooling_factor", s.cooling_factor},
          {"steps", s.steps}, {"refresh_every", s.refresh_every}, {"log_every", s.log_every},
          {"uniform_moves", s.uniform_moves}};
}

inline AnnealSchedule schedule_from_json(const json& j)
{
  const std::string what = "schedule";
  require_keys(j, {"initial_temperature", "cooling_factor", "steps", "refresh_every", "log_every", "uniform_moves"},
               what);
  AnnealSchedule s;
  s.initial_temperature = get_required<double>(j, "initial_temperature", what);
  s.cooling_factor = get_required<double>(j, "cooling_factor", what);
  s.steps = get_required<long>(j, "steps", what);
  s.refresh_every = get_optional<long>(j, "refresh_every", s.refresh_every, what);
  s.log_every = get_optional<long>(j, "log_every", s.log_every, what);
  s.uniform_moves = get_optional<bool>(j, "uniform_moves", s.uniform_moves, what);
  s.validate();
  return s;
}

inline json to_json(const AnnealManifest& m)
{
  return {{"initial", to_json(m.initial)}, {"kernel", to_json(m.kernel)}, {"schedule", to_json(m.schedule)},
          {"seed", m.seed}};
}

inline AnnealManifest manifest_from_json(const json& j)
{
  const std::string what = "manifest";
  require_keys(j, {"initial", "kernel", "schedule", "seed"}, what);
  AnnealManifest m;
  m.initial = torus_from_json(j.at("initial"));
  m.kernel = kernel_from_json(get_required<json>(j, "kernel", what));
  m.schedule = schedule_from_json(get_required<json>(j, "schedule", what));
  m.seed = get_required<std::uint64_t>(j, "seed", what);
  return m;
}

} // namespace nlperim

#endif
