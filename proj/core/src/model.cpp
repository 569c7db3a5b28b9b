#include "secdrive/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "secdrive/errors.hpp"
#include "secdrive/quadrature.hpp"

namespace secdrive {

using std::numbers::pi;

// Cubic Hermite table of vartheta(t). Derivatives are exact (omega / 2), node
// values come from adaptive quadrature of the envelope. The grid doubles from
// 4097 nodes until interpolating the even nodes reproduces the odd ones to
// 1e-10.
class SweepAngleTable {
 public:
  SweepAngleTable(const std::function<double(double)>& envelope, double theta0, double t_start,
                  double t_end)
      : t_start_(t_start), t_end_(t_end) {
    std::size_t intervals = 4096;
    build(envelope, theta0, intervals);
    for (;;) {
      std::vector<double> coarse_values = values_;
      std::vector<double> coarse_slopes = slopes_;
      const double coarse_h = h_;
      intervals *= 2;
      build(envelope, theta0, intervals);
      double worst = 0.0;
      for (std::size_t k = 1; k < values_.size(); k += 2) {
        const std::size_t left = k / 2;
        const double approx =
            hermite(coarse_values[left], coarse_values[left + 1], coarse_slopes[left],
                    coarse_slopes[left + 1], coarse_h, 0.5);
        worst = std::max(worst, std::abs(approx - values_[k]));
      }
      if (worst < 1e-10) break;
      if (intervals >= (std::size_t{1} << 21)) {
        throw NonConvergence("sweep_angle", "tabulated sweep angle did not converge to 1e-10");
      }
    }
  }

  double operator()(double t) const {
    const double x = (t - t_start_) / h_;
    auto k = static_cast<std::size_t>(std::clamp(std::floor(x), 0.0,
                                                 static_cast<double>(values_.size() - 2)));
    const double u = x - static_cast<double>(k);
    return hermite(values_[k], values_[k + 1], slopes_[k], slopes_[k + 1], h_, u);
  }

  const std::vector<double>& values() const { return values_; }
  double node(std::size_t k) const { return t_start_ + h_ * static_cast<double>(k); }
  double spacing() const { return h_; }

 private:
  static double hermite(double y0, double y1, double d0, double d1, double h, double u) {
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * y1 +
           (u3 - u2) * h * d1;
  }

  void build(const std::function<double(double)>& envelope, double theta0,
             std::size_t intervals) {
    h_ = (t_end_ - t_start_) / static_cast<double>(intervals);
    values_.assign(intervals + 1, theta0);
    slopes_.assign(intervals + 1, 0.0);
    const double tol = 1e-13 / static_cast<double>(intervals);
    double acc = 0.0;
    for (std::size_t k = 0; k <= intervals; ++k) {
      const double t = node(k);
      if (k > 0) acc += integrate_adaptive(envelope, node(k - 1), t, tol).value;
      values_[k] = theta0 + 0.5 * acc;
      slopes_[k] = 0.5 * envelope(t);
    }
  }

  double t_start_;
  double t_end_;
  double h_ = 0.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

double EnvelopeShape::operator()(double t) const {
  switch (kind) {
    case EnvelopeKind::constant:
      return amplitude;
    case EnvelopeKind::gaussian: {
      const double z = (t - t_center) / sigma;
      return amplitude * std::exp(-0.5 * z * z);
    }
    case EnvelopeKind::sin2: {
      const double s = std::sin(pi * t / period);
      return amplitude * s * s;
    }
  }
  return 0.0;
}

std::string EnvelopeShape::name() const {
  switch (kind) {
    case EnvelopeKind::constant:
      return "constant";
    case EnvelopeKind::gaussian:
      return "gaussian";
    case EnvelopeKind::sin2:
      return "sin2";
  }
  return "unknown";
}

EnvelopeKind parse_envelope_kind(const std::string& name) {
  if (name == "constant") return EnvelopeKind::constant;
  if (name == "gaussian") return EnvelopeKind::gaussian;
  if (name == "sin2") return EnvelopeKind::sin2;
  throw ValidationError("unknown envelope shape '" + name + "'");
}

PulseSpec PulseSpec::secant(double nu) {
  if (!std::isfinite(nu) || !(nu > 0.0)) {
    throw ValidationError("secant pulse needs nu > 0");
  }
  PulseSpec p;
  p.kind_ = PulseKind::secant;
  p.nu_ = nu;
  p.label_ = "secant";
  return p;
}

PulseSpec PulseSpec::general(std::function<double(double)> envelope, double theta0,
                             double t_start, double t_end, std::string label) {
  if (!envelope) throw ValidationError("general pulse needs an envelope");
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
    throw ValidationError("general pulse window must satisfy t_start < t_end");
  }
  if (!std::isfinite(theta0)) throw ValidationError("general pulse theta0 must be finite");
  PulseSpec p;
  p.kind_ = PulseKind::general;
  p.nu_ = 0.0;
  p.theta0_ = theta0;
  p.label_ = std::move(label);
  // validation grid: the 1001-point check is subsumed by the table nodes
  for (int k = 0; k <= 1000; ++k) {
    const double t = t_start + (t_end - t_start) * k / 1000.0;
    if (!std::isfinite(envelope(t))) {
      throw ValidationError("general pulse envelope is not finite at t=" + std::to_string(t));
    }
  }
  p.envelope_ = std::move(envelope);
  p.table_ = std::make_shared<const SweepAngleTable>(p.envelope_, theta0, t_start, t_end);
  for (double v : p.table_->values()) {
    if (!(std::abs(v) < pi / 2)) {
      throw ValidationError("general pulse sweep angle leaves (-pi/2, pi/2)");
    }
  }
  return p;
}

PulseSpec PulseSpec::general(const EnvelopeShape& shape, double theta0, double t_start,
                             double t_end) {
  return general(shape, theta0, t_start, t_end, shape.name());
}

PulseSpec PulseSpec::reversed() const {
  PulseSpec p = *this;
  if (is_secant()) {
    p.nu_ = -nu_;
  } else {
    p.sign_ = -sign_;
    p.theta0_ = -theta0_;
  }
  p.label_ = label_ + "-reversed";
  return p;
}

TimeWindow PulseSpec::window() const {
  if (is_secant()) {
    const double edge = pi / std::abs(nu_);
    return {-edge, edge, false};
  }
  return {table_->node(0), table_->node(table_->values().size() - 1), true};
}

double PulseSpec::time_scale() const {
  if (is_secant()) return 1.0 / std::abs(nu_);
  return window().length() / (2.0 * pi);
}

void PulseSpec::require_in_window(double t) const {
  if (!window().contains(t)) {
    std::ostringstream os;
    os << "time " << t << " outside the window of " << describe();
    throw ValidationError(os.str());
  }
}

double PulseSpec::omega_x(double t) const {
  if (is_secant()) return nu_;
  require_in_window(t);
  return sign_ * envelope_(t);
}

double PulseSpec::sweep_angle(double t) const {
  if (is_secant()) return 0.5 * nu_ * t;
  require_in_window(t);
  return sign_ * (*table_)(t);
}

double PulseSpec::time_at_sweep_angle(double angle) const {
  if (is_secant()) return 2.0 * angle / nu_;
  const TimeWindow w = window();
  double lo = w.start;
  double hi = w.end;
  double f_lo = sweep_angle(lo) - angle;
  double f_hi = sweep_angle(hi) - angle;
  if (f_lo * f_hi > 0.0) {
    throw ValidationError("sweep angle " + std::to_string(angle) + " not reached by " +
                          describe());
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = sweep_angle(mid) - angle;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string PulseSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (is_secant()) {
    os << "secant(nu=" << nu_ << ")";
  } else {
    const TimeWindow w = window();
    os << label_ << "(theta0=" << theta0_ << ", window=[" << w.start << ", " << w.end << "])";
  }
  return os.str();
}

PulseSpec sweeping_pulse(EnvelopeShape shape, double t_start, double t_end, double delta_prime) {
  if (!(delta_prime > 0.0 && delta_prime < pi / 2)) {
    throw ValidationError("delta_prime must lie in (0, pi/2)");
  }
  EnvelopeShape unit = shape;
  unit.amplitude = 1.0;
  const double area = integrate_adaptive(unit, t_start, t_end, 1e-14).value;
  if (!(area > 0.0)) throw ValidationError("envelope has no positive area on the window");
  shape.amplitude = 2.0 * (pi - 2.0 * delta_prime) / area;
  return PulseSpec::general(shape, -pi / 2 + delta_prime, t_start, t_end);
}

std::array<double, 3> BlochPoint::unit_vector() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

BlochPoint BlochPoint::from_vector(const std::array<double, 3>& r) {
  const double norm = std::hypot(r[0], r[1], r[2]);
  double phi = std::atan2(r[1], r[0]);
  if (phi < 0.0) phi += 2.0 * pi;
  return {std::acos(std::clamp(r[2] / norm, -1.0, 1.0)), phi};
}

namespace {

double checked_sec(const PulseSpec& pulse, double t) {
  const double angle = pulse.sweep_angle(t);
  if (std::abs(angle) >= pi / 2 - kPoleGuard) {
    std::ostringstream os;
    os << "sec argument " << angle << " at t=" << t << " is within the pole guard";
    throw SingularityError(os.str());
  }
  return 1.0 / std::cos(angle);
}

}  // namespace

Operator hamiltonian(const PulseSpec& pulse, const Spin& spin, double t) {
  const double sec = checked_sec(pulse, t);
  const double omega = pulse.omega_x(t);
  return omega * (angular_momentum(spin, Axis::x) - 0.5 * sec * angular_momentum(spin, Axis::z));
}

GaugeAngles gauge_angles(const PulseSpec& pulse, double t) {
  const double a = pi / 2 - pulse.sweep_angle(t);
  return {a, a};
}

Operator gauge_transform(const PulseSpec& pulse, const Spin& spin, double t) {
  const GaugeAngles g = gauge_angles(pulse, t);
  const Complex i(0.0, 1.0);
  return mat_exp(i * g.alpha * angular_momentum(spin, Axis::x)) *
         mat_exp(i * g.beta * angular_momentum(spin, Axis::y));
}

Operator effective_hamiltonian(const PulseSpec& pulse, const Spin& spin, double t) {
  const Operator h = hamiltonian(pulse, spin, t);
  const double step = 1e-6 * pulse.time_scale();
  const Operator g = gauge_transform(pulse, spin, t);
  const Operator dg = (gauge_transform(pulse, spin, t + step) -
                       gauge_transform(pulse, spin, t - step)) /
                      (2.0 * step);
  const Complex i(0.0, 1.0);
  return g.adjoint() * h * g - i * (g.adjoint() * dg);
}

double effective_field(const PulseSpec& pulse, double t) {
  return -0.5 * pulse.omega_x(t) * checked_sec(pulse, t);
}

Operator invariant_at_angle(const Spin& spin, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return -c * angular_momentum(spin, Axis::x) +
         s * (c * angular_momentum(spin, Axis::y) + s * angular_momentum(spin, Axis::z));
}

Operator invariant(const PulseSpec& pulse, const Spin& spin, double t) {
  return invariant_at_angle(spin, pulse.sweep_angle(t));
}

BlochPoint bloch_angles_at_angle(double angle) {
  const double s = std::sin(angle);
  return {std::acos(std::clamp(s * s, -1.0, 1.0)), pi - std::atan(s)};
}

BlochPoint bloch_angles(const PulseSpec& pulse, double t) {
  return bloch_angles_at_angle(pulse.sweep_angle(t));
}

State coherent_state(const Spin& spin, const BlochPoint& point, double m) {
  const std::size_t index = spin.index_of(m);
  const auto d = static_cast<Eigen::Index>(spin.dim());
  State out(d);
  if (spin.twice_j() == 1) {
    const double c = std::cos(point.theta / 2);
    const double s = std::sin(point.theta / 2);
    if (index == 0) {
      out << c, s * std::polar(1.0, point.phi);
    } else {
      out << s * std::polar(1.0, -point.phi), -c;
    }
    return out;
  }
  const Complex i(0.0, 1.0);
  const State tilted = mat_exp(-i * point.theta * angular_momentum(spin, Axis::y)).col(
      static_cast<Eigen::Index>(index));
  for (Eigen::Index k = 0; k < d; ++k) {
    const double mk = spin.m_at(static_cast<std::size_t>(k));
    out(k) = std::polar(1.0, (m - mk) * point.phi) * tilted(k);
  }
  return out;
}

State invariant_eigenstate_at_angle(const Spin& spin, double angle, double m) {
  return coherent_state(spin, bloch_angles_at_angle(angle), m);
}

State invariant_eigenstate(const PulseSpec& pulse, const Spin& spin, double t, double m) {
  return invariant_eigenstate_at_angle(spin, pulse.sweep_angle(t), m);
}

double diabatic_level(const PulseSpec& pulse, double m, double t) {
  const double sec = checked_sec(pulse, t);
  const double angle = pulse.sweep_angle(t);
  return -0.5 * m * pulse.omega_x(t) * (std::cos(angle) + sec);
}

std::vector<double> diabatic_levels(const PulseSpec& pulse, const Spin& spin, double t) {
  std::vector<double> levels;
  levels.reserve(spin.dim());
  for (double m : spin.magnetic_numbers()) levels.push_back(diabatic_level(pulse, m, t));
  return levels;
}

}  // namespace secdrive
