#pragma once

// Instantaneous (adiabatic) eigenframe of H(t) and the measures showing that
// the secant model never becomes adiabatic, however slow the sweep.

#include <vector>

#include "secdrive/algebra.hpp"
#include "secdrive/model.hpp"

namespace secdrive {

struct AdiabaticFrame {
  /// Mixing angle arccos(-Omega_z / sqrt(Omega_x^2 + Omega_z^2)) in [0, pi].
  double theta_ad = 0.0;
  /// exp(i theta_ad J_y)|m>, basis order (m = j first).
  std::vector<State> states;
  /// <psi_m^ad|H|psi_m^ad>, same order as `states`.
  std::vector<double> energies;
};

/// Requires omega_x(t) > 0. Throws SingularityError near the pole.
AdiabaticFrame adiabatic_frame(const PulseSpec& pulse, const Spin& spin, double t);

/// Closed form of the secant model's mixing angle, arccos[(1 + 4 cos^2(q/2))^(-1/2)].
double secant_mixing_angle(double q);

/// -<m|J_y|m>.
double adiabatic_connection(const Spin& spin, double m);

struct AdiabaticRatio {
  /// |sin(q/2)| / 2 * sin(theta_ad) cos^2(theta_ad)
  double closed_form = 0.0;
  /// |<psi_+|d psi_-/dt>| / |E_+ - E_-| with a central-difference derivative.
  double state_derivative = 0.0;
  /// |<psi_+|dH/dt|psi_->| / (E_+ - E_-)^2 with a central-difference derivative.
  double hamiltonian_derivative = 0.0;
};

/// Closed form as a function of q = nu t only.
double adiabatic_ratio_closed_form(double q);

/// Secant pulse, j = 1/2. Throws ValidationError for other pulses.
AdiabaticRatio adiabatic_condition_ratio(const PulseSpec& pulse, double t);

/// 1 - |<phi_m(t)|phi'_m(t)>|^2 between the invariant bases of H and -H
/// (j = 1/2, secant pulse).
double reversed_model_fidelity_loss(const PulseSpec& pulse, double t, double m);

/// sin^2(q/2) cos^2(q/2).
double fidelity_loss_closed_form(double q);

}  // namespace secdrive
