#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "secdrive/analytic.hpp"
#include "secdrive/errors.hpp"
#include "secdrive/experiments.hpp"
#include "secdrive/numerics.hpp"

namespace secdrive::cli {

namespace {

using std::numbers::pi;

void require_secant_half(const RunConfig& cfg) {
  if (cfg.pulse != "secant") {
    throw ValidationError("key=pulse " + to_string(cfg.command) + " needs the secant pulse");
  }
  if (cfg.j != 0.5) throw ValidationError("key=j " + to_string(cfg.command) + " needs j = 0.5");
}

PhaseMethod phase_method(const std::string& name) {
  if (name == "automatic") return PhaseMethod::automatic;
  if (name == "analytic") return PhaseMethod::analytic;
  if (name == "quadrature") return PhaseMethod::quadrature;
  if (name == "discrete") return PhaseMethod::discrete_overlap;
  return PhaseMethod::ode;
}

void write_outputs(const RunConfig& cfg, const SweepResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  const std::string base = (fs::path(cfg.output_dir) / to_string(cfg.command)).string();
  if (cfg.format == OutputFormat::csv) {
    std::ofstream data(base + ".csv", std::ios::binary);
    write_csv(result, data);
    if (!data) throw Error("cannot write " + base + ".csv");
  } else {
    std::ofstream data(base + ".json", std::ios::binary);
    data << to_json(result).dump(2) << '\n';
    if (!data) throw Error("cannot write " + base + ".json");
  }
  std::ofstream meta(base + ".meta", std::ios::binary);
  meta << "# secdrive run metadata; re-run with --config " << base << ".meta\n";
  meta << '[' << to_string(cfg.command) << "]\n";
  for (const auto& [k, v] : cfg.to_keys()) meta << k << " = " << v << '\n';
  meta << "[result]\n";
  for (const auto& [k, v] : result.metadata) meta << k << " = " << v << '\n';
  if (!meta) throw Error("cannot write " + base + ".meta");
}

void print_metadata(const SweepResult& r, std::ostream& out) {
  for (const auto& [k, v] : r.metadata) out << k << '=' << v << '\n';
}

SweepResult run_simulate(const RunConfig& cfg, std::ostream& out) {
  const PulseSpec pulse = cfg.make_pulse();
  const Spin spin(cfg.j);
  const auto [t0, tf] = cfg.window();
  const std::size_t n = std::max<std::size_t>(cfg.samples(), 2);
  std::vector<double> times;
  for (std::size_t k = 1; k < n; ++k) {
    times.push_back(k + 1 == n ? tf : t0 + (tf - t0) * static_cast<double>(k) / (n - 1.0));
  }
  const State psi0 = invariant_eigenstate(pulse, spin, t0, cfg.m);
  const TrajectoryRecord rec =
      integrate_schrodinger(pulse, spin, psi0, t0, tf, cfg.integrator, times);

  SweepResult r;
  r.axis_name = "t";
  r.axis_values = rec.times;
  std::vector<double> population(rec.times.size()), fid(rec.times.size());
  const Complex frame = inner(analytic_state(pulse, spin, cfg.m, t0, t0), psi0);
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    population[k] =
        fidelity(invariant_eigenstate(pulse, spin, rec.times[k], cfg.m), rec.states[k]);
    if (cfg.compare) {
      fid[k] = fidelity(frame * analytic_state(pulse, spin, cfg.m, t0, rec.times[k]),
                        rec.states[k]);
    }
  }
  r.series = {{"norm", rec.norms}, {"invariant_population", population}};
  if (cfg.compare) r.series.emplace_back("fidelity_analytic", fid);
  r.metadata = {{"steps_accepted", std::to_string(rec.steps_accepted)},
                {"steps_rejected", std::to_string(rec.steps_rejected)},
                {"final_norm_drift", format_number(std::abs(rec.norms.back() - 1.0))}};
  if (cfg.compare) {
    r.metadata["final_fidelity"] = format_number(fid.back());
    r.metadata["fidelity_meets_1e-8"] = fid.back() >= 1.0 - 1e-8 ? "true" : "false";
  }
  r.validate();
  print_metadata(r, out);
  return r;
}

SweepResult run_phase(const RunConfig& cfg, std::ostream& out) {
  const PulseSpec pulse = cfg.make_pulse();
  const Spin spin(cfg.j);
  const auto [t0, tf] = cfg.window();
  const PhaseMethod method = phase_method(cfg.method);
  PhaseBreakdown b;
  if (method == PhaseMethod::discrete_overlap) {
    b = discrete_phase_breakdown(pulse, spin, cfg.m, t0, tf, cfg.samples());
  } else if (method == PhaseMethod::ode) {
    b = ode_phase_breakdown(pulse, spin, cfg.m, t0, tf, cfg.integrator);
  } else {
    b = phase_breakdown(pulse, spin, cfg.m, t0, tf, method);
  }
  SweepResult r;
  r.axis_name = "m";
  r.axis_values = {b.m};
  r.series = {{"total", {b.total}},
              {"dynamical", {b.dynamical}},
              {"geometric", {b.geometric}},
              {"t0", {b.t0}},
              {"tf", {b.tf}}};
  r.metadata = {{"method", to_string(b.method)}};
  r.validate();
  out << "total=" << format_number(b.total) << '\n'
      << "dynamical=" << format_number(b.dynamical) << '\n'
      << "geometric=" << format_number(b.geometric) << '\n'
      << "m=" << format_number(b.m) << '\n'
      << "t0=" << format_number(b.t0) << '\n'
      << "tf=" << format_number(b.tf) << '\n'
      << "method=" << to_string(b.method) << '\n';
  return r;
}

int run_selftest(std::ostream& out) {
  int failures = 0;
  for (const SelftestCheck& check : selftest_checks()) {
    std::string detail;
    bool ok = false;
    try {
      ok = check.run(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    out << (ok ? "PASS " : "FAIL ") << check.name << ' ' << detail << '\n';
    if (!ok) ++failures;
  }
  out << "selftest failures=" << failures << '\n';
  return failures == 0 ? 0 : 1;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == '"') c = '\'';
  }
  return s;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out) {
  SweepResult result;
  switch (cfg.command) {
    case Command::selftest:
      return run_selftest(out);
    case Command::simulate:
      result = run_simulate(cfg, out);
      break;
    case Command::phase:
      result = run_phase(cfg, out);
      break;
    case Command::levels:
      require_secant_half(cfg);
      result = run_field_and_levels(cfg.nu, cfg.samples());
      print_metadata(result, out);
      break;
    case Command::bloch:
      require_secant_half(cfg);
      result = run_bloch_path(cfg.nu, cfg.samples(), cfg.delta);
      print_metadata(result, out);
      break;
    case Command::truncate:
      require_secant_half(cfg);
      result = run_truncation_sweep(cfg.nu,
                                    cfg.deltas.empty() ? default_truncation_deltas() : cfg.deltas);
      print_metadata(result, out);
      break;
    case Command::adiabaticity:
      require_secant_half(cfg);
      result = run_adiabaticity(cfg.nu, cfg.samples());
      print_metadata(result, out);
      break;
    case Command::universality: {
      if (cfg.j != 0.5) throw ValidationError("key=j universality needs j = 0.5");
      result = run_universality(default_universality_envelopes(cfg.delta_prime), cfg.delta_prime,
                                cfg.m, cfg.samples());
      const std::vector<double>& g = result.column("geometric_phase");
      for (std::size_t k = 0; k < g.size(); ++k) {
        out << "geometric_phase[" << k << "]=" << format_number(g[k]) << '\n';
      }
      print_metadata(result, out);
      break;
    }
  }
  write_outputs(cfg, result);
  return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secant-pulse driven spin: invariants, phases and sweeps", "secdrive"};
  app.require_subcommand(1);
  std::ostringstream key_help;
  key_help << "Configuration keys (--key value, or key = value in --config files):\n";
  for (const KeyInfo& k : config_keys()) {
    key_help << "  " << k.name << " [" << k.default_value << "]  " << k.help << '\n';
  }
  key_help << "Numbers accept a pi factor: 0.2pi, pi, -pi/4.";
  app.footer(key_help.str());

  struct Sub {
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> values;
  };
  std::vector<Sub> subs(command_names().size());
  for (std::size_t c = 0; c < command_names().size(); ++c) {
    Sub& s = subs[c];
    s.app = app.add_subcommand(command_names()[c]);
    s.app->footer(key_help.str());
    s.app->add_option("--config", s.config_path, "key=value file with optional [section]s");
    for (const KeyInfo& k : config_keys()) {
      if (k.name == "command" || k.name == "artifact_version") continue;
      s.app->add_option("--" + k.name, s.values[k.name], k.help)
          ->default_str(k.default_value)
          ->allow_extra_args(false);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "secdrive: error=validation message=\"" << one_line(e.what()) << "\"\n";
    return 2;
  }

  try {
    for (std::size_t c = 0; c < subs.size(); ++c) {
      Sub& s = subs[c];
      if (!s.app->parsed()) continue;
      const Command command = static_cast<Command>(c);
      std::map<std::string, std::string> flags;
      for (const auto& [name, value] : s.values) {
        if (s.app->get_option("--" + name)->count() > 0) flags[name] = value;
      }
      std::map<std::string, std::string> file_values;
      if (!s.config_path.empty()) file_values = read_config_file(s.config_path, command);
      return run_command(resolve_config(command, file_values, flags), out);
    }
  } catch (const NumericalError& e) {
    err << "secdrive: error=numerical op=" << e.op() << " message=\"" << one_line(e.what())
        << "\"\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "secdrive: error=validation message=\"" << one_line(e.what()) << "\"\n";
    return 2;
  } catch (const SingularityError& e) {
    err << "secdrive: error=singularity message=\"" << one_line(e.what()) << "\"\n";
    return 2;
  } catch (const CoordinateSingularity& e) {
    err << "secdrive: error=singularity message=\"" << one_line(e.what()) << "\"\n";
    return 2;
  } catch (const DegeneratePath& e) {
    err << "secdrive: error=validation message=\"" << one_line(e.what()) << "\"\n";
    return 2;
  } catch (const std::exception& e) {
    err << "secdrive: error=internal message=\"" << one_line(e.what()) << "\"\n";
    return 1;
  }
  return 2;
}

}  // namespace secdrive::cli
