#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "secdrive/analytic.hpp"
#include "secdrive/errors.hpp"
#include "secdrive/numerics.hpp"

using namespace secdrive;
using std::numbers::pi;

namespace {

const Complex I(0.0, 1.0);
const double kLoopPhase = (pi - 2.0) / 2.0;

double loop_kernel(double nu, double t) {
  const double c = std::cos(nu * t / 2), s = std::sin(nu * t / 2);
  return nu * c * c * c / (4.0 * (1.0 + s * s));
}

double wrap(double x) { return std::remainder(x, 2 * pi); }

PulseSpec gaussian_pulse() {
  EnvelopeShape g{EnvelopeKind::gaussian};
  g.amplitude = 1.0;
  g.sigma = 1.0;
  return sweeping_pulse(g, -4.0, 4.0, 0.05 * pi);
}

}  // namespace

TEST(AnalyticState, TrivialAtStart) {
  const Spin half(0.5);
  const PulseSpec p = PulseSpec::secant(1.0);
  const State psi = analytic_state(p, half, 0.5, 0.3, 0.3);
  EXPECT_LT((psi - gauge_transform(p, half, 0.3) * basis_state(half, 0.5)).norm(), 1e-15);
}

TEST(AnalyticState, GaugeFramePhaseMatchesSimpsonOracle) {
  const PulseSpec p = PulseSpec::secant(1.0);
  const double frame = gauge_frame_phase(p, 0.0, pi / 2);
  const double simpson = oracle::simpson([](double t) { return -0.5 / std::cos(t / 2); }, 0.0,
                                         pi / 2, 2000);
  EXPECT_NEAR(frame, -std::log(1.0 + std::sqrt(2.0)), 1e-14);
  EXPECT_NEAR(frame, simpson, 1e-11);
  // accumulated phase -m * frame
  const Spin half(0.5);
  const State psi = analytic_state(p, half, 0.5, 0.0, pi / 2);
  const State frame_state = gauge_transform(p, half, pi / 2) * basis_state(half, 0.5);
  const double phase = std::arg(inner(frame_state, psi));
  EXPECT_NEAR(phase, 0.5 * std::log(1.0 + std::sqrt(2.0)), 1e-13);
  EXPECT_NEAR(phase, 0.4407, 1e-4);
}

TEST(AnalyticState, GeneralPulseFramePhaseByQuadrature) {
  const PulseSpec g = gaussian_pulse();
  const double simpson = oracle::simpson(
      [&](double t) { return -0.5 * g.omega_x(t) / std::cos(g.sweep_angle(t)); }, -3.0, 2.0, 4000);
  EXPECT_NEAR(gauge_frame_phase(g, -3.0, 2.0), simpson, 1e-9);
}

TEST(AnalyticState, UnitNormAndPoleGuard) {
  const PulseSpec p = PulseSpec::secant(2.0);
  for (double j : {0.5, 1.0, 1.5}) {
    const Spin s(j);
    for (double t : {-1.4, 0.0, 1.5}) {
      EXPECT_NEAR(analytic_state(p, s, s.m_at(0), -1.5, t).norm(), 1.0, 1e-12);
    }
  }
  EXPECT_THROW(analytic_state(p, Spin(0.5), 0.5, 0.0, pi / 2), SingularityError);
}

TEST(AnalyticState, SolvesSchrodingerEquation) {
  auto g = oracle::rng(7);
  for (const PulseSpec& p : {PulseSpec::secant(1.0), PulseSpec::secant(3.0), gaussian_pulse()}) {
    const TimeWindow w = p.window();
    const double scale = p.time_scale();
    for (double j : {0.5, 1.0, 1.5}) {
      const Spin s(j);
      for (int trial = 0; trial < 100; ++trial) {
        const double t0 = w.start + 0.05 * w.length();
        const double t = t0 + oracle::uniform(g, 0.01, 0.85) * w.length();
        const double m = s.m_at(static_cast<std::size_t>(trial) % s.dim());
        const double h = 1e-5 * scale;
        const State d = (analytic_state(p, s, m, t0, t + h) - analytic_state(p, s, m, t0, t - h)) /
                        (2 * h);
        const Operator ht = hamiltonian(p, s, t);
        const State residual = I * d - ht * analytic_state(p, s, m, t0, t);
        ASSERT_LT(residual.norm(), 1e-4 * ht.norm()) << p.describe() << " j=" << j << " t=" << t;
      }
    }
  }
}

TEST(PhaseKernel, ClosedFormValues) {
  const PulseSpec p = PulseSpec::secant(1.0);
  const Spin half(0.5);
  EXPECT_NEAR(geometric_phase_kernel(p, half, 0.5, 0.0), 0.25, 1e-15);
  EXPECT_LT(std::abs(geometric_phase_kernel(p, half, 0.5, pi - 1e-6)), 1e-17);
  EXPECT_LT(std::abs(geometric_phase_kernel(p, half, 0.5, -pi + 1e-6)), 1e-17);
  for (double nu : {0.5, 1.0, 2.0}) {
    const PulseSpec pn = PulseSpec::secant(nu);
    for (double q : {-2.5, -0.7, 0.3, 1.9}) {
      const double t = q / nu;
      EXPECT_NEAR(geometric_phase_kernel(pn, half, 0.5, t), loop_kernel(nu, t), 1e-15);
      EXPECT_EQ(geometric_phase_kernel(pn, half, -0.5, t),
                -geometric_phase_kernel(pn, half, 0.5, t));
    }
  }
}

TEST(PhaseKernel, MatchesFiniteDifferenceConnection) {
  for (double nu : {0.5, 1.0, 4.0}) {
    const PulseSpec p = PulseSpec::secant(nu);
    const double h = 1e-6 / nu;
    for (double j : {0.5, 1.0, 1.5}) {
      const Spin s(j);
      for (double m : s.magnetic_numbers()) {
        for (double q : {-2.9, -1.0, 0.0, 0.6, 2.7}) {
          const double t = q / nu;
          const State a = invariant_eigenstate(p, s, t - h, m);
          const State b = invariant_eigenstate(p, s, t + h, m);
          const State c = invariant_eigenstate(p, s, t, m);
          const double fd = (inner(c, I * (b - a) / (2 * h))).real();
          EXPECT_NEAR(geometric_phase_kernel(p, s, m, t), fd, 1e-5 * nu)
              << "nu=" << nu << " j=" << j << " m=" << m << " q=" << q;
        }
      }
    }
  }
}

TEST(PhaseKernel, GeneralSpinScalesWithM) {
  const PulseSpec p = PulseSpec::secant(1.0);
  for (double j : {1.0, 1.5, 2.0, 2.5}) {
    const Spin s(j);
    for (double m : s.magnetic_numbers()) {
      for (double t : {-2.0, 0.5}) {
        EXPECT_NEAR(geometric_phase_kernel(p, s, m, t), 2 * m * loop_kernel(1.0, t), 1e-9);
      }
    }
  }
}

TEST(PhaseBreakdown, FullLoopGeometricPhase) {
  const PulseSpec p = PulseSpec::secant(1.0);
  const Spin half(0.5);
  const double delta = 1e-6 * pi;
  const PhaseBreakdown up = phase_breakdown(p, half, 0.5, -pi + delta, pi - delta);
  EXPECT_EQ(up.method, PhaseMethod::analytic);
  EXPECT_NEAR(up.geometric, kLoopPhase, 1e-12);
  EXPECT_NEAR(up.geometric, 0.570796, 1e-6);
  const PhaseBreakdown down = phase_breakdown(p, half, -0.5, -pi + delta, pi - delta);
  EXPECT_NEAR(down.geometric, -kLoopPhase, 1e-12);
  const PhaseBreakdown half_window = phase_breakdown(p, half, 0.5, -pi + delta, 0.0);
  EXPECT_NEAR(half_window.geometric, (pi - 2) / 4, 1e-12);
}

TEST(PhaseBreakdown, TotalIsSumAndMethodsAgree) {
  const Spin half(0.5);
  for (const PulseSpec& p : {PulseSpec::secant(1.0), PulseSpec::secant(0.25)}) {
    const double t0 = -0.9 * pi / p.nu(), tf = 0.7 * pi / p.nu();
    const PhaseBreakdown a = phase_breakdown(p, half, 0.5, t0, tf, PhaseMethod::analytic);
    const PhaseBreakdown q = phase_breakdown(p, half, 0.5, t0, tf, PhaseMethod::quadrature);
    EXPECT_EQ(a.total, a.dynamical + a.geometric);
    EXPECT_NEAR(q.total, q.dynamical + q.geometric, 1e-15 * std::abs(q.total));
    EXPECT_NEAR(a.geometric, q.geometric, 1e-9);
    EXPECT_NEAR(a.dynamical, q.dynamical, 1e-9 * std::abs(a.dynamical));
    EXPECT_EQ(q.method, PhaseMethod::quadrature);
  }
}

TEST(PhaseBreakdown, DynamicalClosedForm) {
  const PulseSpec p = PulseSpec::secant(2.0);
  const Spin half(0.5);
  const double t0 = -1.0, tf = 1.2;
  auto anti = [](double a) { return std::sin(a) + std::log(1 / std::cos(a) + std::tan(a)); };
  const PhaseBreakdown b = phase_breakdown(p, half, 0.5, t0, tf);
  EXPECT_NEAR(b.dynamical, 0.5 * (anti(tf) - anti(t0)), 1e-13);
  const double simpson = oracle::simpson(
      [&](double t) { return -diabatic_level(p, 0.5, t); }, t0, tf, 4000);
  EXPECT_NEAR(b.dynamical, simpson, 1e-10);
}

TEST(PhaseBreakdown, RejectsPolesAndOracleMethods) {
  const PulseSpec p = PulseSpec::secant(1.0);
  const Spin half(0.5);
  EXPECT_THROW(phase_breakdown(p, half, 0.5, -pi, 0.0), SingularityError);
  EXPECT_THROW(phase_breakdown(p, half, 0.5, 0.0, pi), SingularityError);
  EXPECT_THROW(phase_breakdown(p, half, 0.5, -1, 1, PhaseMethod::ode), ValidationError);
  EXPECT_THROW(phase_breakdown(p, half, 0.2, -1, 1), ValidationError);
}

TEST(PhaseBreakdown, LewisRiesenfeldConsistency) {
  auto g = oracle::rng(99);
  for (const PulseSpec& p : {PulseSpec::secant(1.0), PulseSpec::secant(5.0), gaussian_pulse()}) {
    const TimeWindow w = p.window();
    for (double j : {0.5, 1.0, 1.5}) {
      const Spin s(j);
      for (double m : s.magnetic_numbers()) {
        for (int trial = 0; trial < 5; ++trial) {
          const double t0 = w.start + oracle::uniform(g, 0.02, 0.4) * w.length();
          const double t = t0 + oracle::uniform(g, 0.05, 0.55) * w.length();
          const Complex frame = inner(invariant_eigenstate(p, s, t0, m),
                                      analytic_state(p, s, m, t0, t0));
          ASSERT_NEAR(std::abs(frame), 1.0, 1e-12);
          const PhaseBreakdown b = phase_breakdown(p, s, m, t0, t);
          const State lhs = analytic_state(p, s, m, t0, t);
          const State rhs = frame * std::polar(1.0, b.total) * invariant_eigenstate(p, s, t, m);
          const double phase_error = std::abs(std::arg(inner(rhs, lhs)));
          EXPECT_LT(phase_error, 1e-8) << p.describe() << " j=" << j << " m=" << m;
          EXPECT_NEAR(std::abs(inner(rhs, lhs)), 1.0, 1e-10);
        }
      }
    }
  }
}

TEST(PhaseBreakdown, GeometricPartIndependentOfNu) {
  const Spin half(0.5);
  const double delta = 1e-3 * pi;
  const double reference =
      phase_breakdown(PulseSpec::secant(1.0), half, 0.5, -pi + delta, pi - delta).geometric;
  for (double nu : {0.1, 10.0}) {
    const double g = phase_breakdown(PulseSpec::secant(nu), half, 0.5, (-pi + delta) / nu,
                                     (pi - delta) / nu)
                         .geometric;
    EXPECT_NEAR(g, reference, 1e-10) << nu;
    const double gq = phase_breakdown(PulseSpec::secant(nu), half, 0.5, (-pi + delta) / nu,
                                      (pi - delta) / nu, PhaseMethod::quadrature)
                          .geometric;
    EXPECT_NEAR(gq, reference, 1e-10) << nu;
  }
  // the dynamical part does depend on nu only through the window, not the path
  EXPECT_NEAR(
      phase_breakdown(PulseSpec::secant(10.0), half, 0.5, -0.2, 0.2).dynamical,
      phase_breakdown(PulseSpec::secant(1.0), half, 0.5, -2.0, 2.0).dynamical, 1e-12);
}

TEST(PhaseBreakdown, SpinOneLoopIsTwiceMTimesSpinHalf) {
  const PulseSpec p = PulseSpec::secant(1.0);
  const Spin one(1.0);
  const double delta = 1e-6 * pi;
  EXPECT_NEAR(phase_breakdown(p, one, 1.0, -pi + delta, pi - delta).geometric, pi - 2, 1e-9);
  EXPECT_NEAR(phase_breakdown(p, one, 0.0, -pi + delta, pi - delta).geometric, 0.0, 1e-12);
  EXPECT_NEAR(phase_breakdown(p, one, -1.0, -pi + delta, pi - delta).geometric, -(pi - 2), 1e-9);
}

TEST(PhaseBreakdown, GaussianMatchesSecantAtMatchedTruncation) {
  const Spin half(0.5);
  const double dp = 0.05 * pi;
  const PulseSpec g = gaussian_pulse();
  const TimeWindow w = g.window();
  const double secant =
      phase_breakdown(PulseSpec::secant(1.0), half, 0.5, -pi + 2 * dp, pi - 2 * dp).geometric;
  EXPECT_NEAR(phase_breakdown(g, half, 0.5, w.start, w.end).geometric, secant, 1e-8);
  EXPECT_NEAR(geometric_antiderivative(pi / 2 - dp) - geometric_antiderivative(-pi / 2 + dp),
              secant, 1e-14);
}

TEST(BerryConnection, Values) {
  EXPECT_DOUBLE_EQ(berry_connection({pi / 2, 0.3}, 0.5), -0.5);
  EXPECT_DOUBLE_EQ(berry_connection({pi / 2, 0.3}, -0.5), 0.5);
  EXPECT_NEAR(berry_connection({1e-4, 0.0}, 0.5), -1e-4 / 4, 1e-12);
  EXPECT_THROW(berry_connection({0.0, 0.0}, 0.5), CoordinateSingularity);
  EXPECT_THROW(berry_connection({pi, 0.0}, 0.5), CoordinateSingularity);
}

TEST(BerryConnection, CurlIsMonopoleField) {
  // radial curl of an azimuthal field on the unit sphere: (1/sin) d(sin A)/dtheta
  const double h = 1e-5;
  for (double m : {0.5, -0.5}) {
    for (double theta : {0.3, 1.0, pi / 2, 2.5}) {
      auto f = [&](double th) { return std::sin(th) * berry_connection({th, 0.0}, m); };
      const double curl = (f(theta + h) - f(theta - h)) / (2 * h) / std::sin(theta);
      EXPECT_NEAR(curl, -m, 1e-8) << theta;
    }
  }
}

TEST(SolidAngle, SecantLoop) {
  const PulseSpec p = PulseSpec::secant(1.0);
  const double delta = 1e-6 * pi;
  const std::vector<BlochPoint> path = sample_bloch_path(p, -pi + delta, pi - delta, 100000);
  const LoopGeometry loop = solid_angle(path, true);
  EXPECT_NEAR(loop.solid_angle, pi - 2, 1e-6);
  EXPECT_NEAR(loop.signed_solid_angle, -(pi - 2), 1e-6);
  EXPECT_EQ(loop.orientation, Orientation::clockwise);
  EXPECT_NEAR(loop_geometric_phase(loop, 0.5), kLoopPhase, 1e-6);
  EXPECT_NEAR(loop_geometric_phase(loop, -0.5), -kLoopPhase, 1e-6);
  const double geometric = phase_breakdown(p, Spin(0.5), 0.5, -pi + delta, pi - delta).geometric;
  EXPECT_NEAR(geometric, 0.5 * loop.solid_angle, 1e-6);
}

TEST(SolidAngle, MatchesLineIntegralOracle) {
  // Stokes on the loop: Omega = int (1 - cos theta) dphi, independent of the fan apex
  const double delta = 1e-4 * pi;
  const int n = 20000;
  const double a0 = -pi / 2 + delta / 2, a1 = pi / 2 - delta / 2;
  const double oracle_value = oracle::simpson(
      [](double a) {
        const double s = std::sin(a);
        const double phidot = -std::cos(a) / (1 + s * s);
        return (1 - s * s) * phidot;
      },
      a0, a1, 2000);
  std::vector<BlochPoint> path;
  for (int k = 0; k <= n; ++k) path.push_back(bloch_angles_at_angle(a0 + (a1 - a0) * k / n));
  EXPECT_NEAR(solid_angle(path, true).signed_solid_angle, oracle_value, 1e-7);
}

TEST(SolidAngle, EquatorAndOctant) {
  std::vector<BlochPoint> equator;
  for (int k = 0; k < 200; ++k) equator.push_back({pi / 2, 2 * pi * k / 200.0});
  const LoopGeometry e = solid_angle(equator, true);
  EXPECT_NEAR(e.solid_angle, 2 * pi, 1e-12);
  EXPECT_NEAR(std::abs(e.signed_solid_angle), 2 * pi, 1e-12);

  const std::vector<BlochPoint> octant{{0.0, 0.0}, {pi / 2, 0.0}, {pi / 2, pi / 2}};
  const LoopGeometry o = solid_angle(octant, true);
  EXPECT_NEAR(o.solid_angle, pi / 2, 1e-14);
  EXPECT_NEAR(o.signed_solid_angle, pi / 2, 1e-14);
  EXPECT_EQ(o.orientation, Orientation::counterclockwise);
  const std::vector<BlochPoint> reversed{{pi / 2, pi / 2}, {pi / 2, 0.0}, {0.0, 0.0}};
  const LoopGeometry r = solid_angle(reversed, true);
  EXPECT_NEAR(r.signed_solid_angle, -pi / 2, 1e-14);
  EXPECT_EQ(r.orientation, Orientation::clockwise);
  EXPECT_GE(r.solid_angle, 0.0);
  EXPECT_LT(r.solid_angle, 4 * pi);
}

TEST(SolidAngle, RejectsDegeneratePaths) {
  const std::vector<BlochPoint> repeated{{0.5, 0.0}, {0.5, 0.0}, {1.0, 1.0}};
  EXPECT_THROW(solid_angle(repeated, true), DegeneratePath);
  const std::vector<BlochPoint> two{{0.5, 0.0}, {1.0, 1.0}};
  EXPECT_THROW(solid_angle(two, true), ValidationError);
}

TEST(SolidAngle, DiscreteOverlapOnEquatorGivesMinusPi) {
  const Spin half(0.5);
  std::vector<State> states;
  for (int k = 0; k < 400; ++k) states.push_back(coherent_state(half, {pi / 2, 2 * pi * k / 400.0}, 0.5));
  EXPECT_NEAR(wrap(discrete_geometric_phase(states, true) + pi), 0.0, 1e-10);
}

TEST(PhaseBreakdown, FiniteRightUpToThePoleGuard) {
  const double eps = 2e-9;
  EXPECT_NEAR(dynamical_antiderivative(-pi / 2 + eps), -1.0 + std::log(eps / 2), 1e-6);
  EXPECT_NEAR(dynamical_antiderivative(pi / 2 - eps), 1.0 - std::log(eps / 2), 1e-6);
  const PhaseBreakdown b =
      phase_breakdown(PulseSpec::secant(1.0), Spin(0.5), 0.5, -pi + 2 * eps, 0.0);
  EXPECT_TRUE(std::isfinite(b.total));
  EXPECT_NEAR(gauge_frame_phase(PulseSpec::secant(1.0), -pi + 2 * eps, 0.0), std::log(eps / 2),
              1e-6);
}
