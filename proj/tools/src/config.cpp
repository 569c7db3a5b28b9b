#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "secdrive/errors.hpp"
#include "secdrive/experiments.hpp"

namespace secdrive::cli {

namespace {

using std::numbers::pi;

const std::vector<std::string> kCommands{"simulate", "phase",        "levels",       "bloch",
                                         "truncate", "adiabaticity", "universality", "selftest"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& why) {
  throw ValidationError("key=" + key + " value=\"" + value + "\" " + why);
}

double number_for(const std::string& key, const std::string& value) {
  try {
    return parse_number(value);
  } catch (const ValidationError&) {
    bad_value(key, value, "is not a number");
  }
}

long integer_for(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(value, &used);
  } catch (const std::exception&) {
    bad_value(key, value, "is not an integer");
  }
  if (used != value.size()) bad_value(key, value, "is not an integer");
  return out;
}

bool bool_for(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "is not a boolean");
}

std::string optional_text(const std::optional<double>& v) {
  return v ? format_number(*v) : "";
}

}  // namespace

std::string to_string(Command c) { return kCommands[static_cast<std::size_t>(c)]; }

Command parse_command(const std::string& name) {
  const auto it = std::find(kCommands.begin(), kCommands.end(), name);
  if (it == kCommands.end()) throw ValidationError("unknown command \"" + name + "\"");
  return static_cast<Command>(it - kCommands.begin());
}

const std::vector<std::string>& command_names() { return kCommands; }

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys{
      {"pulse", "secant", "secant | constant | gaussian | sin2"},
      {"nu", "1", "secant scanning frequency (> 0)"},
      {"sigma", "1", "gaussian width"},
      {"t_center", "0", "gaussian centre"},
      {"period", "2pi", "sin2 period"},
      {"t_start", "0", "general-pulse window start"},
      {"t_end", "2pi", "general-pulse window end"},
      {"delta_prime", "0.001pi",
       "general pulses are rescaled to sweep vartheta over (-pi/2 + delta_prime, pi/2 - delta_prime)"},
      {"j", "0.5", "spin label (half-integer)"},
      {"m", "0.5", "invariant eigenvalue"},
      {"delta", "0.001pi", "secant window truncation: nu t in (-(pi - delta), pi - delta)"},
      {"t0", "", "explicit window start (overrides delta)"},
      {"tf", "", "explicit window end (overrides delta)"},
      {"method", "automatic", "phase method: automatic | analytic | quadrature | discrete | ode"},
      {"n", "0", "samples; 0 selects the command default"},
      {"deltas", "", "comma-separated truncations for truncate; empty selects the default grid"},
      {"compare", "false", "simulate: compare the ODE state with the analytic solution"},
      {"rel_tol", "1e-10", "integrator relative tolerance"},
      {"abs_tol", "1e-12", "integrator absolute tolerance"},
      {"h_init", "0.001", "integrator initial step"},
      {"h_min", "1e-14", "integrator minimum step"},
      {"max_steps", "10000000", "integrator step budget"},
      {"output_dir", "secdrive_out", "directory for <command>.csv|json and <command>.meta"},
      {"format", "csv", "csv | json"},
      {"command", "", "sidecar echo; must match the subcommand"},
      {"artifact_version", "", "sidecar echo; must match this build"},
  };
  return keys;
}

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw ValidationError("empty number");
  const auto pos = text.find("pi");
  std::size_t used = 0;
  auto plain = [&](const std::string& s) {
    try {
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ValidationError("bad number \"" + raw + "\"");
      return v;
    } catch (const std::logic_error&) {
      throw ValidationError("bad number \"" + raw + "\"");
    }
  };
  if (pos == std::string::npos) return plain(text);
  const std::string head = text.substr(0, pos);
  const std::string tail = text.substr(pos + 2);
  double factor = 1.0;
  if (head == "-") {
    factor = -1.0;
  } else if (!head.empty() && head != "+") {
    factor = plain(head);
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/') throw ValidationError("bad number \"" + raw + "\"");
    divisor = plain(tail.substr(1));
  }
  return factor * pi / divisor;
}

std::map<std::string, std::string> read_config_file(const std::string& path, Command command) {
  std::ifstream in(path);
  if (!in) throw ValidationError("key=config value=\"" + path + "\" cannot be read");
  std::map<std::string, std::string> out;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError("config " + path + ":" + std::to_string(line_no) + " bad section");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "result") parse_command(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config " + path + ":" + std::to_string(line_no) +
                            " expected key = value");
    }
    if (section == "result") continue;
    if (!section.empty() && section != to_string(command)) continue;
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig resolve_config(Command command, const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& flag_values) {
  RunConfig cfg;
  cfg.command = command;
  std::map<std::string, std::string> merged = file_values;
  for (const auto& [k, v] : flag_values) merged[k] = v;

  for (const auto& [key, value] : merged) {
    if (key == "pulse") {
      cfg.pulse = value;
    } else if (key == "nu") {
      cfg.nu = number_for(key, value);
    } else if (key == "sigma") {
      cfg.sigma = number_for(key, value);
    } else if (key == "t_center") {
      cfg.t_center = number_for(key, value);
    } else if (key == "period") {
      cfg.period = number_for(key, value);
    } else if (key == "t_start") {
      cfg.t_start = number_for(key, value);
    } else if (key == "t_end") {
      cfg.t_end = number_for(key, value);
    } else if (key == "delta_prime") {
      cfg.delta_prime = number_for(key, value);
    } else if (key == "j") {
      cfg.j = number_for(key, value);
    } else if (key == "m") {
      cfg.m = number_for(key, value);
    } else if (key == "delta") {
      cfg.delta = number_for(key, value);
    } else if (key == "t0") {
      cfg.t0 = value.empty() ? std::nullopt : std::optional(number_for(key, value));
    } else if (key == "tf") {
      cfg.tf = value.empty() ? std::nullopt : std::optional(number_for(key, value));
    } else if (key == "method") {
      cfg.method = value;
    } else if (key == "n") {
      cfg.n = integer_for(key, value);
    } else if (key == "deltas") {
      cfg.deltas.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) cfg.deltas.push_back(number_for(key, item));
      }
    } else if (key == "compare") {
      cfg.compare = bool_for(key, value);
    } else if (key == "rel_tol") {
      cfg.integrator.rel_tol = number_for(key, value);
    } else if (key == "abs_tol") {
      cfg.integrator.abs_tol = number_for(key, value);
    } else if (key == "h_init") {
      cfg.integrator.h_init = number_for(key, value);
    } else if (key == "h_min") {
      cfg.integrator.h_min = number_for(key, value);
    } else if (key == "max_steps") {
      cfg.integrator.max_steps = integer_for(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "format") {
      if (value == "csv") {
        cfg.format = OutputFormat::csv;
      } else if (value == "json") {
        cfg.format = OutputFormat::json;
      } else {
        bad_value(key, value, "must be csv or json");
      }
    } else if (key == "command") {
      if (value != to_string(command)) bad_value(key, value, "does not match the subcommand");
    } else if (key == "artifact_version") {
      if (value != kArtifactVersion) bad_value(key, value, "does not match this build");
    } else {
      throw ValidationError("key=" + key + " unknown configuration key");
    }
  }
  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& key, const std::string& why) {
    if (!ok) throw ValidationError("key=" + key + " " + why);
  };
  auto finite = [&](double v, const std::string& key) {
    require(std::isfinite(v), key, "must be finite");
  };
  require(pulse == "secant" || pulse == "constant" || pulse == "gaussian" || pulse == "sin2",
          "pulse", "must be secant, constant, gaussian or sin2");
  require(std::isfinite(nu) && nu > 0.0, "nu", "must be > 0");
  require(std::isfinite(sigma) && sigma > 0.0, "sigma", "must be > 0");
  require(std::isfinite(period) && period > 0.0, "period", "must be > 0");
  finite(t_center, "t_center");
  finite(t_start, "t_start");
  finite(t_end, "t_end");
  require(t_end > t_start, "t_end", "must exceed t_start");
  require(delta > 0.0 && delta < pi, "delta", "must lie in (0, pi)");
  require(delta_prime > 0.0 && delta_prime < pi / 2, "delta_prime", "must lie in (0, pi/2)");
  const double twice_j = 2.0 * j;
  require(std::isfinite(j) && j > 0.0 && twice_j == std::round(twice_j), "j",
          "must be a positive half-integer");
  const double jm = j - m;
  require(std::isfinite(m) && std::abs(m) <= j && jm == std::round(jm), "m",
          "must be one of j, j-1, ..., -j");
  if (t0) finite(*t0, "t0");
  if (tf) finite(*tf, "tf");
  if (t0 && tf) require(*tf > *t0, "tf", "must exceed t0");
  require(method == "automatic" || method == "analytic" || method == "quadrature" ||
              method == "discrete" || method == "ode",
          "method", "must be automatic, analytic, quadrature, discrete or ode");
  require(n >= 0, "n", "must be >= 0");
  for (double d : deltas) require(d > 0.0 && d < pi / 2, "deltas", "entries must lie in (0, pi/2)");
  require(!output_dir.empty(), "output_dir", "must not be empty");
  try {
    integrator.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("key=integrator ") + e.what());
  }
}

std::map<std::string, std::string> RunConfig::to_keys() const {
  std::ostringstream list;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (k) list << ',';
    list << format_number(deltas[k]);
  }
  return {{"command", to_string(command)},
          {"artifact_version", kArtifactVersion},
          {"pulse", pulse},
          {"nu", format_number(nu)},
          {"sigma", format_number(sigma)},
          {"t_center", format_number(t_center)},
          {"period", format_number(period)},
          {"t_start", format_number(t_start)},
          {"t_end", format_number(t_end)},
          {"delta_prime", format_number(delta_prime)},
          {"j", format_number(j)},
          {"m", format_number(m)},
          {"delta", format_number(delta)},
          {"t0", optional_text(t0)},
          {"tf", optional_text(tf)},
          {"method", method},
          {"n", std::to_string(samples())},
          {"deltas", list.str()},
          {"compare", compare ? "true" : "false"},
          {"rel_tol", format_number(integrator.rel_tol)},
          {"abs_tol", format_number(integrator.abs_tol)},
          {"h_init", format_number(integrator.h_init)},
          {"h_min", format_number(integrator.h_min)},
          {"max_steps", std::to_string(integrator.max_steps)},
          {"output_dir", output_dir},
          {"format", format == OutputFormat::csv ? "csv" : "json"}};
}

PulseSpec RunConfig::make_pulse() const {
  if (pulse == "secant") return PulseSpec::secant(nu);
  EnvelopeShape shape{parse_envelope_kind(pulse)};
  shape.sigma = sigma;
  shape.t_center = t_center;
  shape.period = period;
  return sweeping_pulse(shape, t_start, t_end, delta_prime);
}

std::pair<double, double> RunConfig::window() const {
  double start = 0.0;
  double end = 0.0;
  if (pulse == "secant") {
    start = -(pi - delta) / nu;
    end = (pi - delta) / nu;
  } else {
    start = t_start;
    end = t_end;
  }
  return {t0.value_or(start), tf.value_or(end)};
}

std::size_t RunConfig::samples() const {
  if (n > 0) return static_cast<std::size_t>(n);
  switch (command) {
    case Command::simulate:
      return 201;
    case Command::phase:
      return 100000;
    case Command::levels:
    case Command::adiabaticity:
      return 2001;
    case Command::bloch:
      return 100001;
    case Command::universality:
      return 10000;
    case Command::truncate:
      return deltas.empty() ? 60 : deltas.size();
    case Command::selftest:
      return 0;
  }
  return 0;
}

}  // namespace secdrive::cli
