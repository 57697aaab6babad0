#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "mcom/errors.hpp"
#include "mcom/figures.hpp"
#include "mcom/pipeline.hpp"
#include "mcom/sweep.hpp"

namespace mcom::cli {

namespace {

using nlohmann::json;

struct GlobalOptions {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  std::string mode = "paper";
  std::string detuning = "effective";
  unsigned threads = 0;
};

struct Override {
  std::string key;
  std::string value;
};

Override split_override(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
    throw ConfigError(fmt::format("--set expects field=value, got '{}'", s));
  return {s.substr(0, eq), s.substr(eq + 1)};
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(fmt::format("value for {} is not a number: '{}'", key, text));
  return v;
}

bool is_sweep_key(const std::string& key) {
  return key == "axis1" || key == "axis2" || key == "observables" || key == "mode" || key == "detuning" ||
         key.rfind("axis1.", 0) == 0 || key.rfind("axis2.", 0) == 0;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot open config '{}'", path));
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
  }
}

// Config keys first, then --mode/--detuning flags (when given explicitly),
// then --set overrides. Parameter overrides act on the parsed struct so an
// alias such as drive never loses to a per-member key from the file.
struct Resolved {
  json config;
  SystemParams params;
  MeanFieldOptions mean_field;
  std::vector<Override> param_overrides;
};

Resolved resolve(const GlobalOptions& g, const CLI::App& app) {
  Resolved r;
  r.config = load_config(g.config_path);
  if (!r.config.is_object()) throw ConfigError("config must be a JSON object");

  for (const auto& raw : g.overrides) {
    auto o = split_override(raw);
    if (is_field(o.key)) {
      r.param_overrides.push_back(o);
    } else if (is_sweep_key(o.key)) {
      const bool textual = o.key == "mode" || o.key == "detuning" || o.key.ends_with(".field") ||
                           o.key.ends_with(".scale");
      if (textual)
        r.config[o.key] = o.value;
      else
        r.config[o.key] = parse_number(o.key, o.value);
    } else {
      throw ConfigError(fmt::format("unknown parameter '{}' in --set", o.key));
    }
  }

  json params = json::object();
  for (const auto& [key, v] : r.config.items()) {
    if (!is_sweep_key(key)) params[key] = v;
  }
  r.params = params_from_json(params);
  for (const auto& o : r.param_overrides) set_field(r.params, o.key, parse_number(o.key, o.value));

  if (r.config.contains("mode")) r.mean_field.opa = parse_opa_coupling(r.config["mode"].get<std::string>());
  if (r.config.contains("detuning"))
    r.mean_field.detuning = parse_detuning_input(r.config["detuning"].get<std::string>());
  if (app.get_option("--mode")->count() > 0) r.mean_field.opa = parse_opa_coupling(g.mode);
  if (app.get_option("--detuning")->count() > 0) r.mean_field.detuning = parse_detuning_input(g.detuning);
  r.config["mode"] = std::string(to_string(r.mean_field.opa));
  r.config["detuning"] = std::string(to_string(r.mean_field.detuning));

  r.params = validate(r.params);
  return r;
}

std::string complex_str(std::complex<double> z) {
  return fmt::format("{:.10g} {} {:.10g}i", z.real(), z.imag() < 0 ? '-' : '+', std::abs(z.imag()));
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

void write_json(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw IoError(fmt::format("cannot open '{}' for writing", path));
  f << j.dump(2) << '\n';
  if (!f) throw IoError(fmt::format("failed writing '{}'", path));
}

int cmd_steady_state(const Resolved& r, const GlobalOptions& g, std::ostream& out) {
  const SteadyState ss = solve_mean_field(r.params, r.mean_field);
  const DerivedCouplings dc = derive(r.params);
  fmt::print(out, "mean field ({} OPA coupling, {} detuning input)\n", to_string(r.mean_field.opa),
             to_string(r.mean_field.detuning));
  fmt::print(out, "  alpha_a       = {}   |alpha_a| = {:.10g}\n", complex_str(ss.alpha_a), std::abs(ss.alpha_a));
  fmt::print(out, "  alpha_c       = {}   |alpha_c| = {:.10g}\n", complex_str(ss.alpha_c), std::abs(ss.alpha_c));
  fmt::print(out, "  beta_1        = {}\n", complex_str(ss.beta_1));
  fmt::print(out, "  beta_2        = {}\n", complex_str(ss.beta_2));
  fmt::print(out, "  delta_c eff   = {:.10g}\n", ss.delta_c_eff);
  fmt::print(out, "  delta_c bare  = {:.10g}\n", ss.delta_c_bare);
  fmt::print(out, "  g_1, g_2      = {:.10g}, {:.10g}\n", dc.g_1, dc.g_2);
  fmt::print(out, "  G_1, G_2      = {:.10g}, {:.10g}\n", ss.g_cap_1, ss.g_cap_2);
  fmt::print(out, "  n_th          = {:.10g}\n", dc.n_th);
  fmt::print(out, "  iterations    = {}\n  residual      = {:.3e}\n", ss.iterations, ss.residual);
  if (!g.out_path.empty()) {
    write_json(g.out_path, {{"params", params_to_json(r.params)},
                            {"alpha_a", complex_json(ss.alpha_a)},
                            {"alpha_c", complex_json(ss.alpha_c)},
                            {"beta_1", complex_json(ss.beta_1)},
                            {"beta_2", complex_json(ss.beta_2)},
                            {"delta_c_eff", ss.delta_c_eff},
                            {"delta_c_bare", ss.delta_c_bare},
                            {"g_1", dc.g_1},
                            {"g_2", dc.g_2},
                            {"G_1", ss.g_cap_1},
                            {"G_2", ss.g_cap_2},
                            {"n_th", dc.n_th},
                            {"iterations", ss.iterations},
                            {"residual", ss.residual}});
  }
  return 0;
}

int cmd_stability(const Resolved& r, const GlobalOptions& g, std::ostream& out) {
  const SteadyState ss = solve_mean_field(r.params, r.mean_field);
  const StabilityReport rep = stability(build_drift(ss, r.params));
  fmt::print(out, "{} (max Re λ = {:.6e})\n", rep.stable ? "stable" : "unstable", rep.max_real_part);
  json eig = json::array();
  for (const auto& e : rep.eigenvalues) {
    fmt::print(out, "  {}\n", complex_str(e));
    eig.push_back(complex_json(e));
  }
  if (!g.out_path.empty())
    write_json(g.out_path, {{"params", params_to_json(r.params)},
                            {"stable", rep.stable},
                            {"max_real_part", rep.max_real_part},
                            {"eigenvalues", eig}});
  return 0;
}

int cmd_entangle(const Resolved& r, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  const PointResult res = evaluate_point(r.params, r.mean_field);
  switch (res.status) {
    case PointStatus::MeanFieldFailure:
    case PointStatus::LyapunovFailure:
    case PointStatus::NonPhysical:
      err << "error: " << res.message << '\n';
      return 2;
    case PointStatus::Unstable:
      err << fmt::format("error: system unstable (max Re λ = {:.6e})\n", res.stability->max_real_part);
      return 2;
    case PointStatus::Ok:
      break;
  }
  fmt::print(out, "E_cB1  = {:.10g}\nE_cB2  = {:.10g}\nE_B1B2 = {:.10g}\n", *res.e_cb1, *res.e_cb2, *res.e_b1b2);
  fmt::print(out, "stability margin (-max Re λ) = {:.6e}\n", -res.stability->max_real_part);
  fmt::print(out, "uncertainty margin = {:.6e}{}\n", res.uncertainty_margin,
             res.uncertainty_margin < -kUncertaintyTolerance
                 ? "  (covariance violates the uncertainty relation)"
                 : "");
  if (!g.out_path.empty())
    write_json(g.out_path, {{"params", params_to_json(r.params)},
                            {"E_cB1", *res.e_cb1},
                            {"E_cB2", *res.e_cb2},
                            {"E_B1B2", *res.e_b1b2},
                            {"max_real_part", res.stability->max_real_part},
                            {"uncertainty_margin", res.uncertainty_margin}});
  return 0;
}

int finish_sweep(const SweepSpec& spec, const std::string& label, const GlobalOptions& g, std::ostream& out,
                 std::ostream& err) {
  const SweepTable table = run_sweep(spec, g.threads);
  const std::string comment = "params: " + sweep_spec_to_json(spec).dump();

  std::size_t stable = 0, unstable = 0, mean_field = 0, other = 0;
  for (const auto& row : table.rows) {
    if (row.stable) ++stable;
    switch (row.status) {
      case PointStatus::Unstable: ++unstable; break;
      case PointStatus::MeanFieldFailure: ++mean_field; break;
      case PointStatus::LyapunovFailure:
      case PointStatus::NonPhysical: ++other; break;
      case PointStatus::Ok: break;
    }
  }
  // With no --out the CSV owns stdout and the summary goes to stderr.
  std::ostream& summary = g.out_path.empty() ? err : out;
  if (g.out_path.empty())
    emit_csv(table, out, comment);
  else
    write_csv(table, g.out_path, comment);
  fmt::print(summary, "{}: {} points, {} stable, {} unstable", label, table.rows.size(), stable, unstable);
  if (mean_field) fmt::print(summary, ", {} without a converged mean field (possible multistability)", mean_field);
  if (other) fmt::print(summary, ", {} with covariance or negativity failures", other);
  fmt::print(summary, "\n");
  if (!g.out_path.empty()) fmt::print(summary, "wrote {}\n", g.out_path);
  return 0;
}

int cmd_sweep(const Resolved& r, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  json j = r.config;
  // Re-express the resolved parameters so overrides land in the spec.
  for (auto it = j.begin(); it != j.end();) {
    if (is_sweep_key(it.key()))
      ++it;
    else
      it = j.erase(it);
  }
  j.update(params_to_json(r.params));
  SweepSpec spec = sweep_spec_from_json(j);
  spec.mean_field = r.mean_field;
  return finish_sweep(spec, "sweep", g, out, err);
}

int cmd_reproduce(const std::string& figure, const GlobalOptions& g, const CLI::App& app, std::ostream& out,
                  std::ostream& err) {
  if (!g.config_path.empty()) throw ConfigError("reproduce uses built-in parameters; use --set to adjust them");
  FigureSpec fig = reproduce(figure);
  for (const auto& raw : g.overrides) {
    const auto o = split_override(raw);
    if (!is_field(o.key)) throw ConfigError(fmt::format("reproduce accepts only parameter overrides, got '{}'", o.key));
    set_field(fig.sweep.base, o.key, parse_number(o.key, o.value));
  }
  if (app.get_option("--mode")->count() > 0) fig.sweep.mean_field.opa = parse_opa_coupling(g.mode);
  if (app.get_option("--detuning")->count() > 0)
    fig.sweep.mean_field.detuning = parse_detuning_input(g.detuning);
  fmt::print(g.out_path.empty() ? err : out, "{}: {}\n", fig.id, fig.description);
  return finish_sweep(fig.sweep, fig.id, g, out, err);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state entanglement in a double-cavity molecular optomechanical system with an OPA"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_path, "output file (CSV for sweeps, JSON otherwise)");
  app.add_option("--set", g.overrides, "override field=value (repeatable)");
  app.add_option("--mode", g.mode, "mean-field OPA coupling: paper|exact");
  app.add_option("--detuning", g.detuning, "delta_c is the effective or the bare detuning: effective|bare");
  app.add_option("--threads", g.threads, "sweep worker threads (0 = all cores)");

  auto* steady = app.add_subcommand("steady-state", "solve and print the classical steady state");
  auto* stab = app.add_subcommand("stability", "drift-matrix eigenvalues and stability verdict");
  auto* ent = app.add_subcommand("entangle", "logarithmic negativities at one parameter point");
  auto* sweep = app.add_subcommand("sweep", "grid sweep defined by the config (axis1, axis2, observables)");
  auto* repro = app.add_subcommand("reproduce", "run a built-in figure sweep");
  std::string figure;
  repro->add_option("figure", figure, "fig2a|fig2b|fig3|...|fig10")->required();
  for (auto* sub : {steady, stab, ent, sweep, repro}) sub->fallthrough();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (repro->parsed()) return cmd_reproduce(figure, g, app, out, err);
    const Resolved r = resolve(g, app);
    if (steady->parsed()) return cmd_steady_state(r, g, out);
    if (stab->parsed()) return cmd_stability(r, g, out);
    if (ent->parsed()) return cmd_entangle(r, g, out, err);
    return cmd_sweep(r, g, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mcom::cli
