#pragma once

#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "secdrive/model.hpp"
#include "secdrive/numerics.hpp"

namespace secdrive::cli {

enum class Command { simulate, phase, levels, bloch, truncate, adiabaticity, universality, selftest };

std::string to_string(Command c);
Command parse_command(const std::string& name);
const std::vector<std::string>& command_names();

enum class OutputFormat { csv, json };

struct KeyInfo {
  std::string name;
  std::string default_value;
  std::string help;
};

/// Every accepted configuration key, in help order.
const std::vector<KeyInfo>& config_keys();

/// Fully resolved run configuration. Every field is a config key of the same
/// name (integrator fields are flattened).
struct RunConfig {
  Command command = Command::phase;
  std::string pulse = "secant";
  double nu = 1.0;
  double sigma = 1.0;
  double t_center = 0.0;
  double period = 2.0 * std::numbers::pi;
  double t_start = 0.0;
  double t_end = 2.0 * std::numbers::pi;
  double j = 0.5;
  double m = 0.5;
  double delta = 1e-3 * std::numbers::pi;
  double delta_prime = 1e-3 * std::numbers::pi;
  std::optional<double> t0;
  std::optional<double> tf;
  std::string method = "automatic";
  long n = 0;
  std::vector<double> deltas;
  bool compare = false;
  IntegratorConfig integrator;
  std::string output_dir = "secdrive_out";
  OutputFormat format = OutputFormat::csv;

  /// Value of every key as text, using 17 significant digits for numbers.
  std::map<std::string, std::string> to_keys() const;
  /// Throws ValidationError on out-of-range values.
  void validate() const;

  PulseSpec make_pulse() const;
  /// Window [t0, tf] of the run: explicit t0/tf if given, otherwise the
  /// delta-truncated secant window or the whole general-pulse window.
  std::pair<double, double> window() const;
  /// n with command-specific defaults applied.
  std::size_t samples() const;
};

/// Number with optional "pi" factor: "0.2pi", "pi", "-pi/4", "3.5e-3".
double parse_number(const std::string& text);

/// Flat key=value text; '#' or ';' start comments; [section] headers select a
/// subcommand. Keys before any header apply to every subcommand. The
/// [result] section is output-only and skipped.
std::map<std::string, std::string> read_config_file(const std::string& path, Command command);

/// defaults < file < flags. Unknown keys and malformed values throw
/// ValidationError naming the key.
RunConfig resolve_config(Command command, const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& flag_values);

}  // namespace secdrive::cli
