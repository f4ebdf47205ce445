#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace nlperim;
using namespace nlperim::cli;

namespace {

constexpr int kUsage = 2;
constexpr int kComputation = 3;

int diagnostic(const std::string& kind, const std::string& message)
{
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
  return kComputation;
}

json flag_value(const Param& p, const std::string& raw)
{
  switch (p.kind) {
    case Kind::Number: return to_number(raw, p.key);
    case Kind::Integer: {
      double v = to_number(raw, p.key);
      if (v != std::floor(v)) throw ConfigurationError(p.key + ": '" + raw + "' is not an integer");
      return static_cast<long long>(v);
    }
    case Kind::String: return raw;
    case Kind::Flag: return true;  // not reached
    case Kind::NumberList: {
      json a = json::array();
      for (const auto& x : split(raw, ',')) a.push_back(to_number(x, p.key));
      return a;
    }
    case Kind::JsonFile: return read_json_file(raw);
  }
  return nullptr;
}

std::string flag_name(const std::string& key)
{
  std::string f = "--" + key;
  std::replace(f.begin(), f.end(), '_', '-');
  return f;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Nonlocal perimeter energies of periodic sets"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string spec_path, out_path, format;
  app.add_option("--spec", spec_path, "re-run a JSON artifact or run object");
  auto* out_opt = app.add_option("--out", out_path, "output file (default: stdout)");
  auto* fmt_opt = app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  struct Bound {
    CLI::App* sub;
    const Command* cmd;
    std::map<std::string, std::string> raw;
    std::map<std::string, CLI::Option*> opts;
  };
  std::vector<Bound> bound;
  bound.reserve(commands().size());
  for (const auto& cmd : commands()) {
    Bound b{app.add_subcommand(cmd.name, cmd.help), &cmd, {}, {}};
    bound.push_back(std::move(b));
  }
  for (auto& b : bound) {
    for (const auto& p : b.cmd->params) {
      std::string help = p.help;
      if (!p.fallback.is_null() && p.kind != Kind::Flag) help += " [" + p.fallback.dump() + "]";
      CLI::Option* o = p.kind == Kind::Flag ? b.sub->add_flag(flag_name(p.key), help)
                                            : b.sub->add_option(flag_name(p.key), b.raw[p.key], help);
      b.opts[p.key] = o;
    }
    if (b.cmd->name == "anneal") {
      for (auto& [key, o] : b.opts)
        if (key != "manifest" && key != "trajectory") b.opts["manifest"]->excludes(o);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    RunSpec spec;
    if (!spec_path.empty()) {
      for (auto& b : bound)
        if (b.sub->parsed()) throw ConfigurationError("--spec cannot be combined with a command");
      spec = spec_from_json(read_json_file(spec_path));
    } else {
      const Bound* hit = nullptr;
      for (auto& b : bound)
        if (b.sub->parsed()) hit = &b;
      if (!hit) {
        std::cerr << app.help();
        return kUsage;
      }
      json params = json::object();
      for (const auto& p : hit->cmd->params)
        if (hit->opts.at(p.key)->count() > 0)
          params[p.key] = p.kind == Kind::Flag ? json(true) : flag_value(p, hit->raw.at(p.key));
      spec.command = hit->cmd->name;
      spec.parameters = normalize(*hit->cmd, params);
      spec.format = hit->cmd->default_format;
    }
    if (fmt_opt->count() > 0) spec.format = format;

    Output out = execute(spec);
    std::string text = render(spec, out);
    if (out_opt->count() > 0) {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigurationError("cannot write '" + out_path + "'");
      f << text;
    } else {
      std::cout << text;
    }
    return out.status;
  } catch (const DivergenceError& e) {
    return diagnostic("divergence", e.what());
  } catch (const ConvergenceError& e) {
    return diagnostic("convergence", e.what());
  } catch (const InfeasibleError& e) {
    return diagnostic("infeasible", e.what());
  } catch (const std::invalid_argument& e) {  // ParameterError, ConfigurationError
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::logic_error& e) {  // DomainError, PreconditionError
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
