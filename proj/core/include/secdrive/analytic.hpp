#pragma once

// Closed-form propagation and the phase bookkeeping of the invariant basis:
// total = dynamical + geometric over a window, plus the loop geometry on the
// Bloch sphere.

#include <span>
#include <string>
#include <vector>

#include "secdrive/algebra.hpp"
#include "secdrive/model.hpp"

namespace secdrive {

enum class PhaseMethod { automatic, analytic, quadrature, discrete_overlap, ode };

std::string to_string(PhaseMethod method);

struct PhaseBreakdown {
  double total = 0.0;
  double dynamical = 0.0;
  double geometric = 0.0;
  double m = 0.0;
  double t0 = 0.0;
  double tf = 0.0;
  PhaseMethod method = PhaseMethod::analytic;
};

enum class Orientation { counterclockwise, clockwise };

struct LoopGeometry {
  /// Unsigned enclosed solid angle.
  double solid_angle = 0.0;
  /// Solid angle with the right-hand (outward normal) sign: negative when clockwise.
  double signed_solid_angle = 0.0;
  Orientation orientation = Orientation::counterclockwise;
  std::vector<BlochPoint> path_samples;
};

/// Integral of the effective field -1/2 omega sec(vartheta) over [t0, t].
/// Closed form ln(sec + tan) for the secant pulse, adaptive quadrature (1e-10)
/// otherwise.
double gauge_frame_phase(const PulseSpec& pulse, double t0, double t);

/// G(t) exp(-i m int X_3) |m>. Throws SingularityError if [t0, t] reaches
/// the pole guard.
State analytic_state(const PulseSpec& pulse, const Spin& spin, double m, double t0, double t);

/// <phi_m|i d/dt|phi_m> along the smooth-gauge invariant basis. Closed form
/// for the secant pulse at j = 1/2; otherwise a five-point difference in the
/// sweep angle times dvartheta/dt = omega / 2.
double geometric_phase_kernel(const PulseSpec& pulse, const Spin& spin, double m, double t);

/// <phi_m|i d/dvartheta|phi_m> by a five-point difference.
double connection_in_sweep_angle(const Spin& spin, double m, double angle);

/// Antiderivative of the j = 1/2, m = +1/2 geometric kernel in the sweep angle:
/// atan(sin a) - sin(a) / 2.
double geometric_antiderivative(double angle);
/// Antiderivative of -E_m / m in the sweep angle: sin a + ln(sec a + tan a).
double dynamical_antiderivative(double angle);

/// Phase split of Phi_m(tf, t0). `automatic` selects `analytic` for the
/// secant pulse at j = 1/2 and `quadrature` otherwise. Oracle methods
/// (discrete_overlap, ode) live in numerics.hpp.
PhaseBreakdown phase_breakdown(const PulseSpec& pulse, const Spin& spin, double m, double t0,
                               double tf, PhaseMethod method = PhaseMethod::automatic);

/// Azimuthal component of the j = 1/2 connection, -/+ sin^2(theta/2) / sin(theta)
/// on the unit sphere. Throws CoordinateSingularity at theta = 0 or pi.
double berry_connection(const BlochPoint& point, double m);

/// Oriented solid angle of a sampled path on the unit sphere, joined into a
/// loop by the geodesic from the last sample back to the first. Throws
/// DegeneratePath if consecutive samples coincide.
LoopGeometry solid_angle(std::span<const BlochPoint> path, bool closed);

/// Geometric phase of eigenvalue m carried around `loop`: -m * signed solid angle.
double loop_geometric_phase(const LoopGeometry& loop, double m);

/// Samples of the invariant's Bloch trajectory, uniform in the sweep angle.
std::vector<BlochPoint> sample_bloch_path(const PulseSpec& pulse, double t0, double tf,
                                          std::size_t n);

}  // namespace secdrive
