#include <cmath>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "secdrive/adiabaticity.hpp"
#include "secdrive/analytic.hpp"
#include "secdrive/experiments.hpp"
#include "secdrive/numerics.hpp"

namespace secdrive::cli {

namespace {

using std::numbers::pi;

const double kLoop = (pi - 2.0) / 2.0;

template <class T>
std::string show(const char* label, T value) {
  std::ostringstream s;
  s << label << '=' << value;
  return s.str();
}

bool loop_phase(std::string& d) {
  const double delta = 1e-6 * pi;
  const PulseSpec p = PulseSpec::secant(1.0);
  const double closed = phase_breakdown(p, Spin(0.5), 0.5, -pi + delta, pi - delta).geometric;
  const double disc =
      discrete_phase_breakdown(p, Spin(0.5), 0.5, -pi + delta, pi - delta, 100000).geometric;
  d = show("closed_err", std::abs(closed - kLoop)) + " " + show("discrete_err", std::abs(disc - kLoop));
  return std::abs(closed - kLoop) < 1e-8 && std::abs(disc - kLoop) < 1e-4;
}

bool solid_angle_identity(std::string& d) {
  const double delta = 1e-6 * pi;
  const LoopGeometry g =
      solid_angle(sample_bloch_path(PulseSpec::secant(1.0), -pi + delta, pi - delta, 100000), true);
  d = show("solid_angle", g.solid_angle);
  return std::abs(g.solid_angle - (pi - 2)) < 1e-6 && std::abs(loop_geometric_phase(g, 0.5) - kLoop) < 1e-6;
}

bool truncation(std::string& d) {
  const SweepResult r = run_truncation_sweep(1.0, default_truncation_deltas());
  const SweepResult tenth = run_truncation_sweep(1.0, {pi / 10});
  d = show("rel_err_pi/10", tenth.column("relative_error")[0]);
  return tenth.column("relative_error")[0] < 1e-3 && !r.axis_values.empty();
}

bool ode_equivalence(std::string& d) {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-13;
  const PulseSpec p = PulseSpec::secant(1.0);
  const double t0 = -0.95 * pi, tf = 0.95 * pi;
  double worst = 1.0;
  for (double j : {0.5, 1.0}) {
    const Spin s(j);
    for (double m : s.magnetic_numbers()) {
      const State psi0 = analytic_state(p, s, m, t0, t0);
      const TrajectoryRecord rec = integrate_schrodinger(p, s, psi0, t0, tf, cfg);
      worst = std::min(worst, fidelity(analytic_state(p, s, m, t0, tf), rec.states.back()));
    }
  }
  d = show("max_infidelity", 1 - worst);
  return worst >= 1 - 1e-8;
}

bool invariant_equation(std::string& d) {
  const PulseSpec p = PulseSpec::secant(1.0);
  const double h = 1e-6;
  double worst = 0.0;
  for (double j : {0.5, 1.0, 1.5}) {
    const Spin s(j);
    for (int k = 0; k < 100; ++k) {
      const double t = -0.95 * pi + 1.9 * pi * (k + 0.5) / 100.0;
      const Operator di = (invariant(p, s, t + h) - invariant(p, s, t - h)) / (2 * h);
      const Operator r =
          Complex(0, 1) * di - commutator(hamiltonian(p, s, t), invariant(p, s, t));
      worst = std::max(worst, r.norm());
    }
  }
  d = show("max_residual", worst);
  return worst < 1e-5;
}

bool levels(std::string& d) {
  const PulseSpec p = PulseSpec::secant(1.0);
  const Spin half(0.5);
  const std::vector<double> e = diabatic_levels(p, half, 0.0);
  double worst = 0.0;
  for (int k = -50; k <= 50; ++k) {
    const double t = 0.98 * pi * k / 50.0;
    const Operator h = hamiltonian(p, half, t);
    const std::vector<double> lv = diabatic_levels(p, half, t);
    for (std::size_t i = 0; i < 2; ++i) {
      const State phi = invariant_eigenstate(p, half, t, half.m_at(i));
      worst = std::max(worst, std::abs(inner(phi, h * phi).real() - lv[i]));
    }
  }
  d = show("gap", e[0] - e[1]) + " " + show("max_mismatch", worst);
  return std::abs(e[0] - e[1] + 1.0) < 1e-12 && worst < 1e-10;
}

bool adiabaticity(std::string& d) {
  bool zero = true;
  for (int tj = 1; tj <= 5; ++tj) {
    const Spin s = Spin::from_twice_j(tj);
    for (double m : s.magnetic_numbers()) zero = zero && adiabatic_connection(s, m) == 0.0;
  }
  double worst = 0.0;
  for (int k = -40; k <= 40; ++k) {
    const AdiabaticRatio r = adiabatic_condition_ratio(PulseSpec::secant(1.0), 0.98 * pi * k / 40.0);
    worst = std::max(worst, std::abs(r.state_derivative - r.closed_form));
  }
  const double peak = reversed_model_fidelity_loss(PulseSpec::secant(1.0), pi / 2, 0.5);
  d = show("ratio_mismatch", worst) + " " + show("loss_peak", peak);
  return zero && worst < 1e-5 && std::abs(peak - 0.25) < 1e-12;
}

bool universality(std::string& d) {
  const double dp = 1e-3 * pi;
  const SweepResult r = run_universality(default_universality_envelopes(dp), dp);
  const std::vector<double>& g = r.column("geometric_phase");
  double worst = 0.0;
  for (double v : g) worst = std::max(worst, std::abs(v - g.back()));
  d = show("max_spread", worst);
  return worst < 1e-6;
}

bool nu_independence(std::string& d) {
  const double delta = 1e-3 * pi;
  double lo = 1e300, hi = -1e300;
  for (double nu : {0.1, 1.0, 10.0}) {
    const double g = phase_breakdown(PulseSpec::secant(nu), Spin(0.5), 0.5, (-pi + delta) / nu,
                                     (pi - delta) / nu)
                         .geometric;
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  d = show("spread", hi - lo);
  return hi - lo < 1e-10;
}

bool general_j(std::string& d) {
  const double delta = 1e-6 * pi;
  const Spin one(1.0);
  double worst = 0.0;
  for (double m : one.magnetic_numbers()) {
    const double g = discrete_phase_breakdown(PulseSpec::secant(1.0), one, m, -pi + delta,
                                              pi - delta, 100000)
                         .geometric;
    worst = std::max(worst, std::abs(g - m * (pi - 2)));
  }
  d = show("max_err", worst);
  return worst < 1e-4;
}

}  // namespace

const std::vector<SelftestCheck>& selftest_checks() {
  static const std::vector<SelftestCheck> checks{
      {"loop_geometric_phase", loop_phase},
      {"solid_angle_identity", solid_angle_identity},
      {"truncation_curve", truncation},
      {"ode_vs_analytic", ode_equivalence},
      {"invariant_equation", invariant_equation},
      {"level_structure", levels},
      {"adiabaticity", adiabaticity},
      {"universality", universality},
      {"nu_independence", nu_independence},
      {"general_j", general_j},
  };
  return checks;
}

}  // namespace secdrive::cli
