#include "secdrive/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "secdrive/errors.hpp"
#include "secdrive/quadrature.hpp"

namespace secdrive {

using std::numbers::pi;

namespace {

constexpr double kQuadratureTol = 1e-10;
constexpr double kConnectionStep = 1e-3;

void require_away_from_pole(double angle, const char* what) {
  if (std::abs(angle) >= pi / 2 - kPoleGuard) {
    throw SingularityError(std::string(what) + ": window reaches the sec pole");
  }
}

void require_interior(const PulseSpec& pulse, double t0, double tf, const char* what) {
  if (!pulse.is_secant() && (!pulse.window().contains(t0) || !pulse.window().contains(tf))) {
    throw ValidationError(std::string(what) + ": [t0, tf] is not inside the pulse window");
  }
  require_away_from_pole(pulse.sweep_angle(t0), what);
  require_away_from_pole(pulse.sweep_angle(tf), what);
}

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double triangle_solid_angle(const Vec3& p, const Vec3& a, const Vec3& b) {
  return 2.0 * std::atan2(dot(p, cross(a, b)), 1.0 + dot(p, a) + dot(a, b) + dot(b, p));
}

Vec3 fan_reference(const std::vector<Vec3>& points) {
  const double r = 1.0 / std::sqrt(3.0);
  static const std::array<Vec3, 14> candidates = {{{1, 0, 0},
                                                   {-1, 0, 0},
                                                   {0, 1, 0},
                                                   {0, -1, 0},
                                                   {0, 0, 1},
                                                   {0, 0, -1},
                                                   {r, r, r},
                                                   {r, r, -r},
                                                   {r, -r, r},
                                                   {r, -r, -r},
                                                   {-r, r, r},
                                                   {-r, r, -r},
                                                   {-r, -r, r},
                                                   {-r, -r, -r}}};
  // keep the fan apex away from the path and from its antipode
  Vec3 best = candidates[0];
  double best_score = std::numeric_limits<double>::infinity();
  for (const Vec3& c : candidates) {
    double worst = 0.0;
    for (const Vec3& v : points) worst = std::max(worst, std::abs(dot(c, v)));
    if (worst < best_score) {
      best_score = worst;
      best = c;
    }
  }
  return best;
}

}  // namespace

std::string to_string(PhaseMethod method) {
  switch (method) {
    case PhaseMethod::automatic:
      return "automatic";
    case PhaseMethod::analytic:
      return "analytic";
    case PhaseMethod::quadrature:
      return "quadrature";
    case PhaseMethod::discrete_overlap:
      return "discrete-overlap";
    case PhaseMethod::ode:
      return "ode";
  }
  return "unknown";
}

double gauge_frame_phase(const PulseSpec& pulse, double t0, double t) {
  if (t == t0) return 0.0;
  if (pulse.is_secant()) {
    const double a0 = pulse.sweep_angle(t0);
    const double a1 = pulse.sweep_angle(t);
    require_away_from_pole(a0, "gauge_frame_phase");
    require_away_from_pole(a1, "gauge_frame_phase");
    // ln(sec a + tan a) = asinh(tan a)
    return -(std::asinh(std::tan(a1)) - std::asinh(std::tan(a0)));
  }
  return integrate_adaptive([&](double tau) { return effective_field(pulse, tau); }, t0, t,
                            kQuadratureTol)
      .value;
}

State analytic_state(const PulseSpec& pulse, const Spin& spin, double m, double t0, double t) {
  const TimeWindow w = pulse.window();
  if (!w.contains(t0) || !w.contains(t)) {
    throw SingularityError("analytic_state: [t0, t] touches the edge of the pulse window");
  }
  const double frame = gauge_frame_phase(pulse, t0, t);
  State basis = basis_state(spin, m);
  return gauge_transform(pulse, spin, t) * (std::polar(1.0, -m * frame) * basis);
}

double connection_in_sweep_angle(const Spin& spin, double m, double angle) {
  const double h = kConnectionStep;
  const State center = invariant_eigenstate_at_angle(spin, angle, m);
  const State derivative = (invariant_eigenstate_at_angle(spin, angle - 2 * h, m) -
                            8.0 * invariant_eigenstate_at_angle(spin, angle - h, m) +
                            8.0 * invariant_eigenstate_at_angle(spin, angle + h, m) -
                            invariant_eigenstate_at_angle(spin, angle + 2 * h, m)) /
                           (12.0 * h);
  // <phi|phi'> is imaginary for a normalized family, so i<phi|phi'> = -Im<phi|phi'>
  return -inner(center, derivative).imag();
}

double geometric_phase_kernel(const PulseSpec& pulse, const Spin& spin, double m, double t) {
  spin.index_of(m);
  const double angle = pulse.sweep_angle(t);
  if (pulse.is_secant() && spin.twice_j() == 1) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return 2.0 * m * pulse.nu() * c * c * c / (4.0 * (1.0 + s * s));
  }
  return connection_in_sweep_angle(spin, m, angle) * 0.5 * pulse.omega_x(t);
}

double geometric_antiderivative(double angle) {
  const double s = std::sin(angle);
  return std::atan(s) - 0.5 * s;
}

double dynamical_antiderivative(double angle) {
  return std::sin(angle) + std::asinh(std::tan(angle));
}

PhaseBreakdown phase_breakdown(const PulseSpec& pulse, const Spin& spin, double m, double t0,
                               double tf, PhaseMethod method) {
  spin.index_of(m);
  require_interior(pulse, t0, tf, "phase_breakdown");
  if (method == PhaseMethod::automatic) {
    method = (pulse.is_secant() && spin.twice_j() == 1) ? PhaseMethod::analytic
                                                         : PhaseMethod::quadrature;
  }
  PhaseBreakdown out;
  out.m = m;
  out.t0 = t0;
  out.tf = tf;
  out.method = method;
  switch (method) {
    case PhaseMethod::analytic: {
      if (!pulse.is_secant() || spin.twice_j() != 1) {
        throw ValidationError("phase_breakdown: closed form needs the secant pulse at j = 1/2");
      }
      const double a0 = pulse.sweep_angle(t0);
      const double a1 = pulse.sweep_angle(tf);
      out.geometric = 2.0 * m * (geometric_antiderivative(a1) - geometric_antiderivative(a0));
      out.dynamical = m * (dynamical_antiderivative(a1) - dynamical_antiderivative(a0));
      break;
    }
    case PhaseMethod::quadrature: {
      out.geometric = integrate_adaptive(
                          [&](double t) { return geometric_phase_kernel(pulse, spin, m, t); }, t0,
                          tf, kQuadratureTol)
                          .value;
      out.dynamical =
          integrate_adaptive([&](double t) { return -diabatic_level(pulse, m, t); }, t0, tf,
                             kQuadratureTol)
              .value;
      break;
    }
    default:
      throw ValidationError("phase_breakdown: method " + to_string(method) +
                            " is provided by the numerics oracles");
  }
  out.total = out.dynamical + out.geometric;
  return out;
}

double berry_connection(const BlochPoint& point, double m) {
  if (point.theta < 1e-12 || pi - point.theta < 1e-12) {
    throw CoordinateSingularity("berry_connection: azimuthal component undefined at the poles");
  }
  const double half = std::sin(point.theta / 2);
  return -2.0 * m * half * half / std::sin(point.theta);
}

LoopGeometry solid_angle(std::span<const BlochPoint> path, bool closed) {
  if (path.size() < 3) throw ValidationError("solid_angle: need at least 3 points");
  std::vector<Vec3> points;
  points.reserve(path.size());
  for (const BlochPoint& p : path) points.push_back(p.unit_vector());
  auto coincide = [](const Vec3& a, const Vec3& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]) <= 1e-12;
  };
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    if (coincide(points[k], points[k + 1])) {
      throw DegeneratePath("solid_angle: consecutive samples " + std::to_string(k) + " and " +
                           std::to_string(k + 1) + " coincide");
    }
  }
  // a closed path may repeat its first sample at the end
  if (closed && coincide(points.front(), points.back())) points.pop_back();

  const Vec3 apex = fan_reference(points);
  double total = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    total += triangle_solid_angle(apex, points[k], points[(k + 1) % points.size()]);
  }
  total = std::remainder(total, 4.0 * pi);

  LoopGeometry out;
  out.signed_solid_angle = total;
  out.solid_angle = std::abs(total);
  out.orientation = total < 0.0 ? Orientation::clockwise : Orientation::counterclockwise;
  out.path_samples.assign(path.begin(), path.end());
  return out;
}

double loop_geometric_phase(const LoopGeometry& loop, double m) {
  return -m * loop.signed_solid_angle;
}

std::vector<BlochPoint> sample_bloch_path(const PulseSpec& pulse, double t0, double tf,
                                          std::size_t n) {
  if (n < 2) throw ValidationError("sample_bloch_path: need at least 2 samples");
  const double a0 = pulse.sweep_angle(t0);
  const double a1 = pulse.sweep_angle(tf);
  std::vector<BlochPoint> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = a0 + (a1 - a0) * static_cast<double>(k) / static_cast<double>(n - 1);
    out[k] = bloch_angles_at_angle(a);
  }
  return out;
}

}  // namespace secdrive
