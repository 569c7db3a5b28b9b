#pragma once

// The secant-pulse-driven spin and its generalized pulse family.
//
// Every pulse is described by an envelope omega(t) along x and a sweep angle
//   vartheta(t) = 1/2 * integral(omega) + vartheta_0,
// with H(t) = omega(t) * (J_x - 1/2 sec(vartheta(t)) J_z). The secant model is
// omega = nu, vartheta = nu t / 2, for which every angle is available in closed
// form. General pulses tabulate vartheta once at construction.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "secdrive/algebra.hpp"

namespace secdrive {

/// Distance from the sec pole at which evaluation of H refuses to proceed.
inline constexpr double kPoleGuard = 1e-9;

enum class PulseKind { secant, general };

enum class EnvelopeKind { constant, gaussian, sin2 };

/// Named envelope shapes accepted from configuration. Values in radians/time.
///   constant: A
///   gaussian: A exp(-(t - t_center)^2 / (2 sigma^2))
///   sin2:     A sin^2(pi t / period)
struct EnvelopeShape {
  EnvelopeKind kind = EnvelopeKind::constant;
  double amplitude = 1.0;
  double sigma = 1.0;
  double t_center = 0.0;
  double period = 1.0;

  double operator()(double t) const;
  std::string name() const;
};

EnvelopeKind parse_envelope_kind(const std::string& name);

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;
  /// Whether the endpoints themselves may be evaluated.
  bool closed = false;

  bool contains(double t) const {
    return closed ? (t >= start && t <= end) : (t > start && t < end);
  }
  double length() const { return end - start; }
};

class SweepAngleTable;

class PulseSpec {
 public:
  /// H = nu (J_x - 1/2 sec(nu t / 2) J_z), nu > 0.
  static PulseSpec secant(double nu);
  /// General family with tabulated sweep angle. Validates |vartheta| < pi/2
  /// on the whole window; throws ValidationError otherwise.
  static PulseSpec general(std::function<double(double)> envelope, double theta0, double t_start,
                           double t_end, std::string label = "custom");
  static PulseSpec general(const EnvelopeShape& shape, double theta0, double t_start,
                           double t_end);

  /// Same model with H -> -H (nu -> -nu for the secant variant).
  PulseSpec reversed() const;

  PulseKind kind() const noexcept { return kind_; }
  bool is_secant() const noexcept { return kind_ == PulseKind::secant; }
  /// Signed secant frequency; negative only for a reversed secant pulse.
  double nu() const noexcept { return nu_; }
  const std::string& label() const noexcept { return label_; }
  /// General pulses only; the vartheta offset at t_start.
  double theta0() const noexcept { return theta0_; }

  TimeWindow window() const;
  /// 1/|nu| for the secant variant; window length / (2 pi) otherwise.
  double time_scale() const;

  /// Envelope omega(t) along x.
  double omega_x(double t) const;
  /// vartheta(t). Throws ValidationError outside the window of a general pulse.
  double sweep_angle(double t) const;
  /// Inverse of sweep_angle for a monotone general pulse.
  double time_at_sweep_angle(double angle) const;

  /// One-line description, e.g. "secant(nu=1)".
  std::string describe() const;

 private:
  PulseSpec() = default;
  void require_in_window(double t) const;

  PulseKind kind_ = PulseKind::secant;
  double nu_ = 1.0;
  double theta0_ = 0.0;
  double sign_ = 1.0;
  std::string label_ = "secant";
  std::function<double(double)> envelope_;
  std::shared_ptr<const SweepAngleTable> table_;
};

/// General pulse whose sweep angle runs from -pi/2 + delta_prime to
/// pi/2 - delta_prime across [t_start, t_end]; the envelope amplitude is
/// rescaled to hit the endpoints exactly.
PulseSpec sweeping_pulse(EnvelopeShape shape, double t_start, double t_end, double delta_prime);

struct BlochPoint {
  double theta = 0.0;
  double phi = 0.0;

  std::array<double, 3> unit_vector() const;
  static BlochPoint from_vector(const std::array<double, 3>& r);
};

struct GaugeAngles {
  double alpha;
  double beta;
};

/// Omega_x(t) (J_x - 1/2 sec(vartheta) J_z). Throws SingularityError within
/// kPoleGuard of the pole.
Operator hamiltonian(const PulseSpec& pulse, const Spin& spin, double t);

GaugeAngles gauge_angles(const PulseSpec& pulse, double t);
/// G(t) = exp(i alpha J_x) exp(i beta J_y).
Operator gauge_transform(const PulseSpec& pulse, const Spin& spin, double t);
/// G^dag H G - i G^dag dG/dt, with dG/dt by central difference.
Operator effective_hamiltonian(const PulseSpec& pulse, const Spin& spin, double t);
/// Closed form of the effective Hamiltonian's J_z coefficient, -1/2 omega sec(vartheta).
double effective_field(const PulseSpec& pulse, double t);

Operator invariant_at_angle(const Spin& spin, double angle);
Operator invariant(const PulseSpec& pulse, const Spin& spin, double t);

BlochPoint bloch_angles_at_angle(double angle);
BlochPoint bloch_angles(const PulseSpec& pulse, double t);

/// Eigenstate of R.J with eigenvalue m in the smooth gauge
/// exp(-i phi J_z) exp(-i theta J_y) exp(i phi J_z)|m>. For j = 1/2 the
/// two-component form cos(theta/2)|+> + sin(theta/2)e^{i phi}|-> (and its
/// partner) is used directly.
State coherent_state(const Spin& spin, const BlochPoint& point, double m);
State invariant_eigenstate_at_angle(const Spin& spin, double angle, double m);
State invariant_eigenstate(const PulseSpec& pulse, const Spin& spin, double t, double m);

/// E_m(t) = -(m omega / 2)(cos vartheta + sec vartheta), in basis order (m = j first).
std::vector<double> diabatic_levels(const PulseSpec& pulse, const Spin& spin, double t);
double diabatic_level(const PulseSpec& pulse, double m, double t);

}  // namespace secdrive
