#ifndef NLPERIM_TOOLS_COMMANDS_HPP
#define NLPERIM_TOOLS_COMMANDS_HPP

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlperim/nlperim.hpp>

namespace nlperim::cli {

enum class Kind { Number, Integer, String, Flag, NumberList, JsonFile };

struct Param {
  std::string key;
  std::string help;
  Kind kind = Kind::Number;
  json fallback = nullptr;  // null: no default
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Output {
  json result;
  Table table;
  int status = 0;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
  std::function<Output(const json&)> run;
  std::string default_format = "json";
};

// ---- formatting ---------------------------------------------------------------

inline std::string fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string fmt(long long x) { return std::to_string(x); }

inline void write_csv(std::ostream& os, const Table& t)
{
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

/// one-row table from the scalar members of a JSON object
inline Table scalar_row(const json& obj)
{
  Table t;
  t.rows.emplace_back();
  for (const auto& [k, v] : obj.items()) {
    if (v.is_structured()) continue;
    t.header.push_back(k);
    if (v.is_null()) t.rows.back().push_back("");
    else if (v.is_string()) t.rows.back().push_back(v.get<std::string>());
    else if (v.is_boolean()) t.rows.back().push_back(v.get<bool>() ? "true" : "false");
    else if (v.is_number_integer()) t.rows.back().push_back(std::to_string(v.get<long long>()));
    else t.rows.back().push_back(fmt(v.get<double>()));
  }
  return t;
}

// ---- parsing helpers ----------------------------------------------------------

inline std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

inline double to_number(const std::string& s, const std::string& what)
{
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError(what + ": '" + s + "' is not a number");
  }
}

inline json read_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigurationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// "start:stop:count" with both endpoints included
inline std::vector<double> parse_grid(const std::string& s)
{
  auto parts = split(s, ':');
  if (parts.size() != 3) throw ConfigurationError("grid must read start:stop:count");
  double a = to_number(parts[0], "grid start"), b = to_number(parts[1], "grid stop");
  double c = to_number(parts[2], "grid count");
  if (!(c >= 1) || c != std::floor(c)) throw ConfigurationError("grid count must be a positive integer");
  const long n = static_cast<long>(c);
  if (n == 1) {
    if (a != b) throw ConfigurationError("a one-point grid needs start == stop");
    return {a};
  }
  std::vector<double> g(n);
  for (long i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = b;
  return g;
}

/// "1,0;0.5,0.866" -> rows
inline std::vector<std::vector<double>> parse_basis(const std::string& s)
{
  std::vector<std::vector<double>> rows;
  for (const auto& r : split(s, ';')) {
    rows.emplace_back();
    for (const auto& x : split(r, ',')) rows.back().push_back(to_number(x, "basis"));
  }
  return rows;
}

// ---- parallel sweeps ----------------------------------------------------------

inline unsigned thread_cap()
{
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NLPERIM_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    throw ConfigurationError("NLPERIM_THREADS must be a positive integer");
  }
  return hw;
}

/// f(i) for i < count on up to thread_cap() workers; results in index order
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F f)
{
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errs(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        out[i] = f(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  unsigned nt = static_cast<unsigned>(std::min<std::size_t>(thread_cap(), count));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---- shared inputs ------------------------------------------------------------

inline std::vector<Param> torus_params(int n_default)
{
  return {
      {"d", "dimension", Kind::Integer, 2},
      {"ell", "torus side length", Kind::Number, 8.0},
      {"n", "cells per side (power of two)", Kind::Integer, n_default},
      {"pattern", "ball, ball_cells, stripes, two_balls, random, random_cells", Kind::String},
      {"radius", "ball radius", Kind::Number},
      {"separation", "two_balls center distance", Kind::Number},
      {"count", "stripe count or cell count", Kind::Integer},
      {"fraction", "stripe or random volume fraction", Kind::Number},
      {"seed", "seed for random patterns", Kind::Integer},
      {"config", "torus configuration JSON file", Kind::JsonFile},
  };
}

inline std::vector<Param> kernel_params(double eps_default)
{
  return {
      {"family", "power_cutoff, fractional_shift, supercritical", Kind::String, "power_cutoff"},
      {"epsilon", "kernel parameter", Kind::Number, eps_default},
      {"q", "supercritical exponent", Kind::Number},
  };
}

template <class... Vs>
std::vector<Param> concat(Vs... vs)
{
  std::vector<Param> out;
  (out.insert(out.end(), vs.begin(), vs.end()), ...);
  return out;
}

inline bool has(const json& p, const char* key) { return p.contains(key) && !p.at(key).is_null(); }

inline json torus_spec(const json& p)
{
  if (has(p, "config")) {
    if (has(p, "pattern")) throw ConfigurationError("give either config or pattern");
    return p.at("config");
  }
  if (!has(p, "pattern")) throw ConfigurationError("a pattern or a config file is required");
  json t{{"d", p.at("d")}, {"ell", p.at("ell")}, {"n", p.at("n")}};
  std::string pat = p.at("pattern").get<std::string>();
  if (pat == "random" || pat == "random_cells") {
    if (!has(p, "seed")) throw ConfigurationError("random patterns require --seed");
    pat += "(" + std::to_string(p.at("seed").get<std::uint64_t>()) + ")";
  }
  t["pattern"] = pat;
  for (const char* k : {"radius", "separation", "count", "fraction"})
    if (has(p, k)) t[k] = p.at(k);
  return t;
}

inline Kernel kernel_spec(const json& p, int d)
{
  json k{{"family", p.at("family")}, {"epsilon", p.at("epsilon")}, {"d", d}};
  if (has(p, "q")) k["q"] = p.at("q");
  return kernel_from_json(k);
}

struct RadialInput {
  RadialAutocorrelation rad;
  std::string source;
};

inline RadialInput radial_input(const json& p)
{
  const std::string source = p.at("source").get<std::string>();
  if (source == "fft") return {autocorrelation_fft(torus_from_json(torus_spec(p))).radial, source};
  if (source != "analytic") throw ConfigurationError("source must be fft or analytic");
  if (has(p, "config")) throw ConfigurationError("analytic sources take a named pattern");
  const int d = p.at("d").get<int>();
  const double ell = p.at("ell").get<double>();
  const std::string pat = has(p, "pattern") ? p.at("pattern").get<std::string>() : "";
  if (pat == "ball") {
    if (!has(p, "radius")) throw ConfigurationError("ball needs --radius");
    return {ball_autocorrelation(p.at("radius").get<double>(), ell, d), source};
  }
  if (pat == "stripes") {
    if (!has(p, "count") || !has(p, "fraction")) throw ConfigurationError("stripes need --count and --fraction");
    double a = ell / p.at("count").get<int>(), f = p.at("fraction").get<double>();
    return {stripe_autocorrelation(StripePattern{d, f * a, (1.0 - f) * a}), source};
  }
  throw ConfigurationError("analytic sources support the ball and stripes patterns");
}

inline void fail_if_divergent(const EnergyReport& r)
{
  if (r.divergent) throw DivergenceError(r.diagnostic.empty() ? "energy diverges" : r.diagnostic);
}

inline json bound_json(const BoundCheck& b) { return {{"lhs", num(b.lhs)}, {"rhs", num(b.rhs)}, {"ok", b.ok}}; }

inline std::vector<double> number_list(const json& p, const char* key)
{
  return p.at(key).get<std::vector<double>>();
}

inline std::vector<double> lambdas(const json& p)
{
  if (has(p, "lambda_grid")) {
    if (has(p, "lambda")) throw ConfigurationError("give either lambda or lambda_grid");
    return parse_grid(p.at("lambda_grid").get<std::string>());
  }
  if (has(p, "lambda")) return {p.at("lambda").get<double>()};
  throw ConfigurationError("lambda or lambda_grid is required");
}

inline BravaisLattice lattice_spec(const json& p)
{
  if (has(p, "basis")) return BravaisLattice::from_rows(parse_basis(p.at("basis").get<std::string>()), "custom");
  return named_lattice(p.at("lattice").get<std::string>());
}

// ---- commands -----------------------------------------------------------------

inline Output run_energy(const json& p)
{
  auto in = radial_input(p);
  Kernel k = kernel_spec(p, in.rad.dimension);
  double r_max = has(p, "r_max") ? p.at("r_max").get<double>() : -1.0;
  auto rep = energy_radial(in.rad, k, r_max, p.at("r0").get<double>());
  fail_if_divergent(rep);
  Output out;
  out.result = {{"source", in.source},
                {"lambda", num(in.rad.value_at_zero)},
                {"slope_at_zero", num(in.rad.slope_at_zero)},
                {"perimeter", num(perimeter_estimate(in.rad, in.rad.torus_volume).value)},
                {"energy", to_json(rep)},
                {"lower_bound", bound_json(lower_bound_check(in.rad, k))}};
  if (k.family == KernelFamily::PowerCutoff && k.epsilon < 0.5)
    out.result["bv_bound"] = bound_json(bv_bound_check(in.rad, k));
  out.table.header = {"value", "near_field", "far_field", "truncation_correction", "quadrature_error"};
  out.table.rows.push_back({fmt(rep.value), fmt(rep.near_field), fmt(rep.far_field), fmt(rep.truncation_correction),
                            fmt(rep.quadrature_error)});
  return out;
}

inline Output run_gamma(const json& p)
{
  auto in = radial_input(p);
  Kernel fam = kernel_spec(p, in.rad.dimension);
  auto sw = epsilon_sweep(in.rad, fam, number_list(p, "eps"));
  fail_if_divergent(sw.limit);
  Output out;
  json pts = json::array();
  out.table.header = {"epsilon", "value", "near", "far", "err"};
  for (const auto& pt : sw.points) {
    const auto& r = pt.report;
    fail_if_divergent(r);
    pts.push_back({{"epsilon", num(pt.epsilon)}, {"value", num(r.value)}, {"near", num(r.near_field)},
                   {"far", num(r.far_field)}, {"err", num(r.quadrature_error)}});
    out.table.rows.push_back(
        {fmt(pt.epsilon), fmt(r.value), fmt(r.near_field), fmt(r.far_field), fmt(r.quadrature_error)});
  }
  out.result = {{"source", in.source}, {"limit", to_json(sw.limit)}, {"rate", num(sw.rate)}, {"points", pts}};
  return out;
}

inline Output run_davila(const json& p)
{
  auto in = radial_input(p);
  Kernel fam = kernel_spec(p, in.rad.dimension);
  auto dv = davila_limit(in.rad, fam, number_list(p, "eps"));
  Output out;
  json pts = json::array();
  out.table.header = {"epsilon", "ratio"};
  for (const auto& pt : dv.points) {
    pts.push_back({{"epsilon", num(pt.epsilon)}, {"ratio", num(pt.ratio)}});
    out.table.rows.push_back({fmt(pt.epsilon), fmt(pt.ratio)});
  }
  out.result = {{"source", in.source}, {"limit", num(dv.limit)}, {"points", pts}};
  return out;
}

inline Output run_stripes(const json& p)
{
  const int d = p.at("d").get<int>();
  const long slices = p.at("slices").get<long>();
  Output out;
  auto single = [&](const StripePattern& sp, bool optimal) {
    json r{{"d", d}, {"lambda", num(sp.fraction())}, {"d0", num(sp.d0)}, {"d1", num(sp.d1)},
           {"period", num(sp.period())}, {"e_S", num(stripe_energy(sp))}};
    if (optimal) r["d_opt"] = num(sp.d0);
    if (slices > 0) r["e_S_slices"] = num(stripe_energy_via_slices(sp, slices));
    out.result = r;
    out.table = scalar_row(r);
  };
  if (has(p, "d0") || has(p, "d1")) {
    if (!has(p, "d0") || !has(p, "d1")) throw ConfigurationError("fixed stripes need both d0 and d1");
    single(StripePattern{d, p.at("d0").get<double>(), p.at("d1").get<double>()}, false);
    return out;
  }
  auto lams = lambdas(p);
  if (lams.size() == 1 && !has(p, "lambda_grid")) {
    const double lam = lams[0];
    if (p.at("optimal").get<bool>()) {
      auto o = optimal_stripe(lam, d);
      single(StripePattern{d, o.width, o.width * (1.0 - lam) / lam}, true);
      return out;
    }
    if (!has(p, "period")) throw ConfigurationError("give --optimal, --period, or --d0 and --d1");
    const double a = p.at("period").get<double>();
    if (!(lam > 0.0 && lam < 1.0)) throw DomainError("lambda must lie in (0,1)");
    single(StripePattern{d, lam * a, (1.0 - lam) * a}, false);
    return out;
  }
  auto opts = parallel_map<OptimalStripe>(lams.size(), [&](std::size_t i) { return optimal_stripe(lams[i], d); });
  json pts = json::array();
  out.table.header = {"lambda", "d_opt", "e_S"};
  for (std::size_t i = 0; i < lams.size(); ++i) {
    double d_opt = opts[i].width;
    pts.push_back({{"lambda", num(lams[i])}, {"d_opt", num(d_opt)}, {"e_S", num(opts[i].energy)}});
    out.table.rows.push_back({fmt(lams[i]), fmt(d_opt), fmt(opts[i].energy)});
  }
  out.result = {{"d", d}, {"points", pts}};
  return out;
}

inline Output run_balls(const json& p)
{
  const int d = p.at("d").get<int>();
  const BravaisLattice L = lattice_spec(p);
  if (L.dimension != d) throw ConfigurationError("lattice dimension does not match --d");
  Output out;
  if (has(p, "zeta")) {
    double tol = has(p, "tol") ? p.at("tol").get<double>() : 1e-6;
    auto z = lattice_zeta(L.normalized(), p.at("zeta").get<double>(), tol);
    out.result = {{"lattice", L.name}, {"s", num(p.at("zeta").get<double>())}, {"zeta", num(z.value)},
                  {"tail_bound", num(z.tail_bound)}, {"radius", num(z.radius)}, {"points", z.points}};
    out.table = scalar_row(out.result);
    return out;
  }
  const double tol = has(p, "tol") ? p.at("tol").get<double>() : 1e-7;
  if (has(p, "radius")) {
    BallLattice b{L.normalized().scaled(p.at("scale").get<double>()), p.at("radius").get<double>()};
    auto e = ball_lattice_energy(b, tol);
    out.result = to_json(e);
    out.result["lattice"] = L.name;
    out.result["radius"] = num(b.radius);
    out.result["scale"] = num(p.at("scale").get<double>());
    out.table = scalar_row(out.result);
    return out;
  }
  auto lams = lambdas(p);
  if (lams.size() == 1 && !has(p, "lambda_grid")) {
    auto o = optimal_ball_lattice(lams[0], L, d, tol);
    out.result = {{"lattice", L.name},
                  {"lambda", num(lams[0])},
                  {"radius", num(o.radius)},
                  {"scale", num(o.scale)},
                  {"e_B", num(o.energy)},
                  {"e_B_over_lambda", num(o.energy / lams[0])},
                  {"max_fraction", num(max_ball_fraction(L.normalized()))},
                  {"detail", to_json(o.detail)}};
    out.table = scalar_row(out.result);
    return out;
  }
  const auto zeta = ball_lattice_zeta(L, tol);
  struct Row {
    bool feasible = false;
    OptimalBallLattice o;
  };
  auto rows = parallel_map<Row>(lams.size(), [&](std::size_t i) {
    try {
      return Row{true, optimal_ball_lattice(lams[i], L, d, tol, zeta)};
    } catch (const InfeasibleError&) {
      return Row{};
    }
  });
  json pts = json::array();
  out.table.header = {"lambda", "radius", "scale", "e_B", "feasible"};
  for (std::size_t i = 0; i < lams.size(); ++i) {
    const auto& r = rows[i];
    pts.push_back({{"lambda", num(lams[i])}, {"feasible", r.feasible},
                   {"radius", r.feasible ? num(r.o.radius) : json(nullptr)},
                   {"scale", r.feasible ? num(r.o.scale) : json(nullptr)},
                   {"e_B", r.feasible ? num(r.o.energy) : json(nullptr)}});
    if (r.feasible)
      out.table.rows.push_back({fmt(lams[i]), fmt(r.o.radius), fmt(r.o.scale), fmt(r.o.energy), "true"});
    else
      out.table.rows.push_back({fmt(lams[i]), "", "", "", "false"});
  }
  out.result = {{"lattice", L.name}, {"points", pts}};
  return out;
}

inline Output run_phase(const json& p)
{
  const int d = p.at("d").get<int>();
  std::vector<BravaisLattice> lats;
  for (const auto& name : split(p.at("lattices").get<std::string>(), ','))
    if (!name.empty()) lats.push_back(named_lattice(name));
  for (const auto& L : lats)
    if (L.dimension != d) throw ConfigurationError("lattice '" + L.name + "' does not match --d");
  auto lams = lambdas(p);
  for (double lam : lams)
    if (!(lam > 0.0 && lam < 1.0)) throw DomainError("lambda must lie in (0,1)");
  auto zetas = parallel_map<LatticeSum>(lats.size(), [&](std::size_t i) { return ball_lattice_zeta(lats[i]); });
  auto verdicts =
      parallel_map<PhaseVerdict>(lams.size(), [&](std::size_t i) { return compare_phases(lams[i], lats, d, zetas); });
  Output out;
  out.table.header = {"lambda", "e_S"};
  for (const auto& L : lats) out.table.header.push_back("e_B_" + L.name);
  out.table.header.push_back("winner");
  json pts = json::array();
  for (std::size_t i = 0; i < lams.size(); ++i) {
    const auto& v = verdicts[i];
    std::string winner = v.phase == Phase::Stripes ? "stripes" : "balls:" + v.lattice;
    std::vector<std::string> row{fmt(lams[i]), fmt(v.stripe_energy)};
    json cands = json::object();
    for (const auto& c : v.candidates) {
      row.push_back(c.feasible ? fmt(c.energy) : "");
      cands[c.lattice] = c.feasible ? json{{"e_B", num(c.energy)}, {"radius", num(c.radius)}} : json(nullptr);
    }
    row.push_back(winner);
    out.table.rows.push_back(row);
    pts.push_back({{"lambda", num(lams[i])}, {"e_S", num(v.stripe_energy)}, {"balls", cands},
                   {"winner", winner}, {"margin", num(v.margin)}});
  }
  out.result = {{"d", d}, {"points", pts}};
  return out;
}

inline AnnealManifest anneal_manifest(const json& p)
{
  if (has(p, "manifest")) return manifest_from_json(p.at("manifest"));
  if (!has(p, "seed")) throw ConfigurationError("anneal requires --seed");
  const std::uint64_t seed = p.at("seed").get<std::uint64_t>();
  AnnealManifest m;
  m.initial = torus_from_json(torus_spec(p));
  m.seed = seed;
  json kp = p;
  if (!has(p, "epsilon")) kp["epsilon"] = 2.0 * m.initial.cell_size();
  m.kernel = kernel_spec(kp, m.initial.dimension());
  auto& s = m.schedule;
  s.initial_temperature = p.at("t0").get<double>();
  s.steps = p.at("steps").get<long>();
  if (has(p, "t_end")) {
    if (has(p, "cooling")) throw ConfigurationError("give either cooling or t_end");
    double te = p.at("t_end").get<double>();
    if (!(te > 0.0 && te < s.initial_temperature && s.steps > 0))
      throw ParameterError("t_end must lie in (0, t0) and steps must be > 0");
    s.cooling_factor = std::exp(std::log(te / s.initial_temperature) / static_cast<double>(s.steps));
  } else {
    s.cooling_factor = has(p, "cooling") ? p.at("cooling").get<double>() : 0.99995;
  }
  s.refresh_every = p.at("refresh").get<long>();
  s.log_every = p.at("log_every").get<long>();
  s.uniform_moves = p.at("uniform").get<bool>();
  s.validate();
  return m;
}

inline Output run_anneal(const json& p)
{
  auto m = anneal_manifest(p);
  if (has(p, "trajectory") && m.schedule.log_every == 0) m.schedule.log_every = 1000;
  auto st = anneal(m.initial, m.kernel, m.schedule, m.seed);
  const auto& c = st.best_config;
  GridEnergy ge(c.dimension(), c.cells_per_side(), c.side_length(), m.kernel);
  const std::size_t cnt = c.occupied_count();
  Output out;
  json r{{"steps", st.step_count},
         {"accepted", st.accepted},
         {"energy", num(st.energy)},
         {"best_energy", num(st.best_energy)},
         {"final_temperature", num(st.temperature)},
         {"max_refresh_drift", num(st.max_refresh_drift)},
         {"fraction", num(c.volume_fraction())},
         {"occupied", cnt}};
  if (cnt > 0) {
    double eb = ge.energy(make_ball_cells(c.dimension(), c.side_length(), c.cells_per_side(), cnt));
    r["fraenkel_asymmetry"] = num(fraenkel_asymmetry(c));
    r["isoperimetric_deficit"] = num(isoperimetric_deficit(c));
    r["ball_energy"] = num(eb);
    r["relative_to_ball"] = num((st.best_energy - eb) / std::abs(eb));
  }
  out.table = scalar_row(r);
  r["manifest"] = to_json(m);
  r["best_config"] = to_json(c);
  out.result = r;
  if (has(p, "trajectory")) {
    std::ofstream f(p.at("trajectory").get<std::string>(), std::ios::binary);
    if (!f) throw ConfigurationError("cannot write trajectory file");
    write_trajectory_csv(f, st);
  }
  return out;
}

inline Output run_verify(const json& p)
{
  VerifyOptions o;
  o.seed = p.at("seed").get<std::uint64_t>();
  o.random_configs = p.at("configs").get<int>();
  o.disjoint_pairs = p.at("pairs").get<int>();
  o.n = p.at("n").get<int>();
  auto rep = run_property_suite(o);
  Output out;
  json checks = json::array();
  long failed = 0;
  out.table.header = {"check", "passed", "slack"};
  for (const auto& c : rep.checks) {
    failed += !c.passed;
    checks.push_back({{"check", c.name}, {"passed", c.passed}, {"slack", num(c.slack)}});
    out.table.rows.push_back({c.name, c.passed ? "true" : "false", fmt(c.slack)});
  }
  out.result = {{"passed", failed == 0}, {"failed", failed}, {"total", rep.checks.size()}, {"checks", checks}};
  out.status = failed == 0 ? 0 : 1;
  return out;
}

inline const std::vector<Command>& commands()
{
  static const std::vector<Command> all = [] {
    const Param source{"source", "fft or analytic", Kind::String, "fft"};
    std::vector<Command> c;
    c.push_back({"energy", "nonlocal energy of one configuration",
                 concat(torus_params(256), kernel_params(0.0),
                        std::vector<Param>{source,
                                           {"r0", "truncation radius", Kind::Number, 1.0},
                                           {"r_max", "largest sampled radius used", Kind::Number}}),
                 run_energy});
    c.push_back({"gamma", "epsilon sweep towards the limit energy",
                 concat(torus_params(256), kernel_params(0.0),
                        std::vector<Param>{source,
                                           {"eps", "decreasing epsilon list", Kind::NumberList,
                                            json::array({0.2, 0.1, 0.05, 0.025})}}),
                 run_gamma, "csv"});
    c.push_back({"davila", "first-order ratio against the perimeter",
                 concat(torus_params(256), kernel_params(0.0),
                        std::vector<Param>{source,
                                           {"eps", "decreasing epsilon list", Kind::NumberList,
                                            json::array({0.1, 0.01, 0.001})}}),
                 run_davila, "csv"});
    c.push_back({"stripes", "stripe energies and optimal widths",
                 {{"d", "dimension", Kind::Integer, 2},
                  {"lambda", "volume fraction", Kind::Number},
                  {"lambda_grid", "start:stop:count", Kind::String},
                  {"optimal", "optimal stripe width", Kind::Flag, false},
                  {"period", "stripe period for fixed stripes", Kind::Number},
                  {"d0", "stripe width", Kind::Number},
                  {"d1", "gap width", Kind::Number},
                  {"slices", "also sum the slice series with this many terms", Kind::Integer, 0}},
                 run_stripes});
    c.push_back({"balls", "ball-lattice energies, optimal scales and lattice sums",
                 {{"d", "dimension", Kind::Integer, 2},
                  {"lattice", "square, triangular, hexagonal, cubic, bcc, fcc", Kind::String, "triangular"},
                  {"basis", "custom basis rows, e.g. 1,0;0,1", Kind::String},
                  {"lambda", "volume fraction", Kind::Number},
                  {"lambda_grid", "start:stop:count", Kind::String},
                  {"radius", "ball radius for a fixed lattice", Kind::Number},
                  {"scale", "lattice scale for --radius", Kind::Number, 1.0},
                  {"zeta", "print the lattice sum with this exponent", Kind::Number},
                  {"tol", "lattice sum tolerance", Kind::Number}},
                 run_balls});
    c.push_back({"phase", "stripes against ball lattices",
                 {{"d", "dimension", Kind::Integer, 2},
                  {"lattices", "comma separated lattice names", Kind::String, "square,triangular"},
                  {"lambda", "volume fraction", Kind::Number},
                  {"lambda_grid", "start:stop:count", Kind::String}},
                 run_phase, "csv"});
    c.push_back({"anneal", "fixed-volume annealing on the torus grid",
                 concat(torus_params(64), kernel_params(0.0),
                        std::vector<Param>{{"t0", "initial temperature", Kind::Number, 0.5},
                                           {"t_end", "final temperature (sets cooling)", Kind::Number},
                                           {"cooling", "cooling factor in (0,1)", Kind::Number},
                                           {"steps", "number of moves", Kind::Integer, 0},
                                           {"refresh", "steps between full FFT refreshes", Kind::Integer, 1000},
                                           {"log_every", "trajectory interval", Kind::Integer, 0},
                                           {"uniform", "uniform instead of boundary moves", Kind::Flag, false},
                                           {"trajectory", "trajectory CSV path", Kind::String},
                                           {"manifest", "run manifest JSON file", Kind::JsonFile}}),
                 run_anneal});
    // the annealing kernel defaults to epsilon = 2h
    for (auto& prm : c.back().params)
      if (prm.key == "epsilon") prm.fallback = nullptr;
    c.push_back({"verify", "property suite",
                 {{"seed", "suite seed", Kind::Integer, 1},
                  {"configs", "random configurations", Kind::Integer, 20},
                  {"pairs", "disjoint pairs", Kind::Integer, 50},
                  {"n", "cells per side", Kind::Integer, 32}},
                 run_verify});
    return c;
  }();
  return all;
}

inline const Command& find_command(const std::string& name)
{
  for (const auto& c : commands())
    if (c.name == name) return c;
  throw ConfigurationError("unknown command '" + name + "'");
}

/// schema check plus defaults
inline json normalize(const Command& cmd, const json& given)
{
  if (!given.is_object()) throw ConfigurationError(cmd.name + ": parameters must be an object");
  json out = json::object();
  for (const auto& [k, v] : given.items()) {
    auto it = std::find_if(cmd.params.begin(), cmd.params.end(), [&](const Param& p) { return p.key == k; });
    if (it == cmd.params.end()) throw ConfigurationError(cmd.name + ": unknown parameter '" + k + "'");
    bool ok = v.is_null();
    switch (it->kind) {
      case Kind::Number: ok |= v.is_number(); break;
      case Kind::Integer: ok |= v.is_number_integer(); break;
      case Kind::String: ok |= v.is_string(); break;
      case Kind::Flag: ok |= v.is_boolean(); break;
      case Kind::NumberList:
        ok |= v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
        break;
      case Kind::JsonFile: ok |= v.is_object(); break;
    }
    if (!ok) throw ConfigurationError(cmd.name + ": bad type for '" + k + "'");
    if (!v.is_null()) out[k] = v;
  }
  for (const auto& p : cmd.params)
    if (!out.contains(p.key) && !p.fallback.is_null()) out[p.key] = p.fallback;
  return out;
}

struct RunSpec {
  std::string command;
  json parameters;
  std::string format;  // csv or json
};

inline json run_object(const RunSpec& s)
{
  return {{"command", s.command}, {"parameters", s.parameters}, {"format", s.format}};
}

/// accepts an emitted artifact ({"run": ..., "result": ...}) or a bare run object
inline RunSpec spec_from_json(const json& j)
{
  const json& r = j.contains("run") ? j.at("run") : j;
  require_keys(r, {"command", "parameters", "format"}, "run spec");
  RunSpec s;
  s.command = get_required<std::string>(r, "command", "run spec");
  const auto& cmd = find_command(s.command);
  s.parameters = normalize(cmd, get_required<json>(r, "parameters", "run spec"));
  s.format = get_optional<std::string>(r, "format", cmd.default_format, "run spec");
  if (s.format != "csv" && s.format != "json") throw ConfigurationError("format must be csv or json");
  return s;
}

inline Output execute(const RunSpec& s) { return find_command(s.command).run(s.parameters); }

/// JSON artifact or CSV text for a finished run
inline std::string render(const RunSpec& s, const Output& o)
{
  std::ostringstream os;
  if (s.format == "csv") {
    write_csv(os, o.table);
  } else {
    os << json{{"run", run_object(s)}, {"result", o.result}}.dump(2) << '\n';
  }
  return os.str();
}

} // namespace nlperim::cli

#endif
