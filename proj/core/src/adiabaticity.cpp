#include "secdrive/adiabaticity.hpp"

#include <cmath>

#include "secdrive/errors.hpp"

namespace secdrive {

AdiabaticFrame adiabatic_frame(const PulseSpec& pulse, const Spin& spin, double t) {
  const Operator h = hamiltonian(pulse, spin, t);
  const double omega_x = pulse.omega_x(t);
  if (!(omega_x > 0.0)) {
    throw ValidationError("adiabatic_frame: the mixing angle convention needs Omega_x > 0");
  }
  const double omega_z = -0.5 * omega_x / std::cos(pulse.sweep_angle(t));
  AdiabaticFrame frame;
  frame.theta_ad = std::acos(-omega_z / std::hypot(omega_x, omega_z));
  const Operator rotation =
      mat_exp(Complex(0.0, frame.theta_ad) * angular_momentum(spin, Axis::y));
  for (double m : spin.magnetic_numbers()) {
    State s = rotation * basis_state(spin, m);
    frame.energies.push_back(inner(s, h * s).real());
    frame.states.push_back(std::move(s));
  }
  return frame;
}

double secant_mixing_angle(double q) {
  const double c = std::cos(0.5 * q);
  return std::acos(1.0 / std::sqrt(1.0 + 4.0 * c * c));
}

double adiabatic_connection(const Spin& spin, double m) {
  const State s = basis_state(spin, m);
  return -inner(s, angular_momentum(spin, Axis::y) * s).real();
}

double adiabatic_ratio_closed_form(double q) {
  const double theta = secant_mixing_angle(q);
  const double c = std::cos(theta);
  return 0.5 * std::abs(std::sin(0.5 * q)) * std::sin(theta) * c * c;
}

AdiabaticRatio adiabatic_condition_ratio(const PulseSpec& pulse, double t) {
  if (!pulse.is_secant()) {
    throw ValidationError("adiabatic_condition_ratio: defined for the secant pulse");
  }
  const Spin half(0.5);
  const double step = 1e-6 * pulse.time_scale();
  const AdiabaticFrame frame = adiabatic_frame(pulse, half, t);
  const AdiabaticFrame before = adiabatic_frame(pulse, half, t - step);
  const AdiabaticFrame after = adiabatic_frame(pulse, half, t + step);
  const double gap = frame.energies[0] - frame.energies[1];

  AdiabaticRatio out;
  out.closed_form = adiabatic_ratio_closed_form(pulse.nu() * t);
  const State d_minus = (after.states[1] - before.states[1]) / (2.0 * step);
  out.state_derivative = std::abs(inner(frame.states[0], d_minus)) / std::abs(gap);
  const Operator dh =
      (hamiltonian(pulse, half, t + step) - hamiltonian(pulse, half, t - step)) / (2.0 * step);
  out.hamiltonian_derivative =
      std::abs(inner(frame.states[0], dh * frame.states[1])) / (gap * gap);
  return out;
}

double reversed_model_fidelity_loss(const PulseSpec& pulse, double t, double m) {
  if (!pulse.is_secant()) {
    throw ValidationError("reversed_model_fidelity_loss: defined for the secant pulse");
  }
  const Spin half(0.5);
  const State forward = invariant_eigenstate(pulse, half, t, m);
  const State backward = invariant_eigenstate(pulse.reversed(), half, t, m);
  return 1.0 - std::norm(inner(forward, backward));
}

double fidelity_loss_closed_form(double q) {
  const double s = std::sin(0.5 * q);
  const double c = std::cos(0.5 * q);
  return s * s * c * c;
}

}  // namespace secdrive
