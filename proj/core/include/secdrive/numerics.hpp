#pragma once

// Independent oracles for the closed-form results: an embedded Runge-Kutta
// integrator for the Schrodinger equation and the discrete (Pancharatnam)
// geometric phase of a sampled family of states.

#include <functional>
#include <span>
#include <vector>

#include "secdrive/algebra.hpp"
#include "secdrive/analytic.hpp"
#include "secdrive/model.hpp"
#include "secdrive/quadrature.hpp"

namespace secdrive {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 1e-3;
  double h_min = 1e-14;
  long max_steps = 10'000'000;

  /// Throws ValidationError when a field is out of range.
  void validate() const;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> norms;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

using HamiltonianFn = std::function<Operator(double)>;

/// Dormand-Prince 5(4) on i dpsi/dt = H(t) psi. The state is never
/// renormalized. When `sample_times` is empty every accepted step is
/// recorded; otherwise steps are shortened to land on each requested time
/// (which must lie in (t0, tf] and increase). t0 is always the first record.
///
/// Throws StepUnderflow when the controller asks for h < h_min and
/// MaxStepsExceeded after cfg.max_steps attempts.
TrajectoryRecord integrate_schrodinger(const HamiltonianFn& hamiltonian, const State& psi0,
                                       double t0, double tf, const IntegratorConfig& cfg,
                                       std::span<const double> sample_times = {});

TrajectoryRecord integrate_schrodinger(const PulseSpec& pulse, const Spin& spin,
                                       const State& psi0, double t0, double tf,
                                       const IntegratorConfig& cfg,
                                       std::span<const double> sample_times = {});

/// |<a|b>|^2
double fidelity(const State& a, const State& b);

/// -sum_k arg<phi_k|phi_{k+1}>, plus the closing link when `closed`. The link
/// phases are summed rather than multiplied so open paths are not wrapped.
/// Throws OverlapTooSmall if any |<phi_k|phi_{k+1}>| <= 0.9.
double discrete_geometric_phase(std::span<const State> samples, bool closed);

enum class Sampling { sweep_angle, time };

/// n invariant eigenstates between t0 and tf, uniform in the sweep angle
/// (equivalently in q = nu t for the secant pulse) or uniform in time.
std::vector<State> sample_invariant_eigenstates(const PulseSpec& pulse, const Spin& spin, double m,
                                                double t0, double tf, std::size_t n,
                                                Sampling sampling = Sampling::sweep_angle);

/// Phase split with the geometric part from the discrete-overlap estimator
/// and the dynamical part by quadrature.
PhaseBreakdown discrete_phase_breakdown(const PulseSpec& pulse, const Spin& spin, double m,
                                        double t0, double tf, std::size_t n, bool closed = false);

/// Phase split with the total phase read off an ODE trajectory started in
/// |phi_m(t0)>, the dynamical part by quadrature and geometric = total -
/// dynamical.
PhaseBreakdown ode_phase_breakdown(const PulseSpec& pulse, const Spin& spin, double m, double t0,
                                   double tf, const IntegratorConfig& cfg,
                                   std::size_t samples = 4096);

}  // namespace secdrive
