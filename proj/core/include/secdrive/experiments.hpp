#pragma once

// Deterministic sweep jobs reproducing the model's figures and claims. All
// grids are in the scaled variable q = nu t; nu only enters the metadata and
// the conversion t = q / nu.

#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "secdrive/model.hpp"

namespace secdrive {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct SweepResult {
  std::string axis_name;
  std::vector<double> axis_values;
  /// Ordered (name, column) pairs; every column matches axis_values in length.
  std::vector<std::pair<std::string, std::vector<double>>> series;
  std::map<std::string, std::string> metadata;

  const std::vector<double>& column(const std::string& name) const;
  /// Throws Error if a column has the wrong length or a non-finite value.
  void validate() const;
};

/// Shortest round-trip form at 17 significant digits ("%.17g").
std::string format_number(double value);

/// UTF-8 CSV, LF line ends: header = axis name then series names.
void write_csv(const SweepResult& result, std::ostream& out);
nlohmann::json to_json(const SweepResult& result);

/// Worker cap from SECDRIVE_THREADS, else the machine's parallelism.
std::size_t worker_count();
/// Runs body(i) for i in [0, n) on up to worker_count() threads. Rethrows the
/// first exception raised by any worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Half-width of the plotting grid's truncation around the poles, 1e-3 pi.
double plot_truncation();

/// Symmetric grid q_k in [-(pi - delta), pi - delta], n points, exactly odd in k.
std::vector<double> symmetric_q_grid(double delta, std::size_t n);

/// Omega_z / nu and E_+/-(t) / nu for j = 1/2 on the plotting grid.
SweepResult run_field_and_levels(double nu, std::size_t n);

/// theta, phi, R on the loop; metadata carries the solid angle.
SweepResult run_bloch_path(double nu, std::size_t n, double delta = 1e-6 * std::numbers::pi);

/// 1 - Phi_+^g(t_f, t_0) / Phi_+^g(loop) for symmetric truncations q = -/+(pi - delta).
SweepResult run_truncation_sweep(double nu, const std::vector<double>& deltas);
/// 60 log-spaced truncations in [1e-3 pi, 0.3 pi].
std::vector<double> default_truncation_deltas();

/// Adiabatic-condition ratio (three routes), H vs -H fidelity loss and the
/// overlap of the invariant and adiabatic bases on the plotting grid.
SweepResult run_adiabaticity(double nu, std::size_t n);

/// Geometric phases of the given pulses (each sweeping vartheta over
/// (-pi/2 + delta_prime, pi/2 - delta_prime)) via the discrete-overlap
/// estimator, followed by a secant reference row at the same truncation.
SweepResult run_universality(const std::vector<PulseSpec>& envelopes, double delta_prime,
                             double m = 0.5, std::size_t n = 10000);
/// constant, gaussian and sin2 envelopes rescaled to sweep at delta_prime.
std::vector<PulseSpec> default_universality_envelopes(double delta_prime);

}  // namespace secdrive
