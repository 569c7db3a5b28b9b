#include "secdrive/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "secdrive/errors.hpp"

namespace secdrive {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// fifth-order minus embedded fourth-order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

constexpr double kQuadratureTol = 1e-10;

State rhs(const HamiltonianFn& h, double t, const State& psi) {
  return Complex(0.0, -1.0) * (h(t) * psi);
}

}  // namespace

void IntegratorConfig::validate() const {
  auto in_range = [](double v) { return v > 1e-14 && v < 1e-2; };
  if (!in_range(rel_tol)) throw ValidationError("rel_tol must lie in (1e-14, 1e-2)");
  if (!in_range(abs_tol)) throw ValidationError("abs_tol must lie in (1e-14, 1e-2)");
  if (!(h_min > 0.0)) throw ValidationError("h_min must be positive");
  if (!(h_init > 0.0)) throw ValidationError("h_init must be positive");
  if (max_steps < 1) throw ValidationError("max_steps must be at least 1");
}

TrajectoryRecord integrate_schrodinger(const HamiltonianFn& hamiltonian, const State& psi0,
                                       double t0, double tf, const IntegratorConfig& cfg,
                                       std::span<const double> sample_times) {
  cfg.validate();
  if (!(tf > t0)) throw ValidationError("integrate_schrodinger: need tf > t0");
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    const double s = sample_times[k];
    if (!(s > t0 && s <= tf) || (k > 0 && !(s > sample_times[k - 1]))) {
      throw ValidationError("integrate_schrodinger: sample times must increase within (t0, tf]");
    }
  }

  TrajectoryRecord rec;
  auto record = [&rec](double t, const State& psi) {
    rec.times.push_back(t);
    rec.states.push_back(psi);
    rec.norms.push_back(psi.norm());
  };

  State psi = psi0;
  double t = t0;
  double h = std::min(cfg.h_init, tf - t0);
  record(t, psi);
  std::size_t next_sample = 0;
  State k1 = rhs(hamiltonian, t, psi);
  long attempts = 0;

  while (t < tf) {
    if (++attempts > cfg.max_steps) {
      throw MaxStepsExceeded("integrate_schrodinger",
                             "exceeded max_steps=" + std::to_string(cfg.max_steps));
    }
    const double target = sample_times.empty() ? tf : sample_times[next_sample];
    bool lands = false;
    double step = h;
    if (t + step >= target) {
      step = target - t;
      lands = true;
    }

    const State k2 = rhs(hamiltonian, t + c2 * step, psi + step * (a21 * k1));
    const State k3 = rhs(hamiltonian, t + c3 * step, psi + step * (a31 * k1 + a32 * k2));
    const State k4 =
        rhs(hamiltonian, t + c4 * step, psi + step * (a41 * k1 + a42 * k2 + a43 * k3));
    const State k5 = rhs(hamiltonian, t + c5 * step,
                         psi + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const State k6 = rhs(hamiltonian, t + step,
                         psi + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const State next = psi + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = rhs(hamiltonian, t + step, next);
    const State err_vec =
        step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(psi.norm(), next.norm());
    const double err = err_vec.norm() / scale;

    if (err <= 1.0) {
      t = lands ? target : t + step;
      psi = next;
      k1 = k7;
      ++rec.steps_accepted;
      if (sample_times.empty()) {
        record(t, psi);
      } else if (lands) {
        record(t, psi);
        ++next_sample;
        if (next_sample == sample_times.size()) break;
      }
      const double factor =
          err == 0.0 ? kMaxFactor
                     : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
      // a step shortened to hit a sample time says nothing about the next one
      h = lands ? std::max(h, step * factor) : step * factor;
    } else {
      ++rec.steps_rejected;
      h = step * std::max(kMinFactor, kSafety * std::pow(err, -0.2));
    }
    if (h < cfg.h_min) {
      throw StepUnderflow("integrate_schrodinger",
                          "step size fell below h_min near t=" + std::to_string(t));
    }
  }
  return rec;
}

TrajectoryRecord integrate_schrodinger(const PulseSpec& pulse, const Spin& spin,
                                       const State& psi0, double t0, double tf,
                                       const IntegratorConfig& cfg,
                                       std::span<const double> sample_times) {
  if (static_cast<std::size_t>(psi0.size()) != spin.dim()) {
    throw ValidationError("integrate_schrodinger: initial state has the wrong dimension");
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-10) {
    throw ValidationError("integrate_schrodinger: initial state is not normalized");
  }
  const Operator jx = angular_momentum(spin, Axis::x);
  const Operator jz = angular_momentum(spin, Axis::z);
  const TimeWindow w = pulse.window();
  if (!w.contains(t0) || !w.contains(tf)) {
    throw ValidationError("integrate_schrodinger: [t0, tf] is not inside the pulse window");
  }
  hamiltonian(pulse, spin, t0);
  hamiltonian(pulse, spin, tf);
  HamiltonianFn h = [&](double t) {
    const double angle = pulse.sweep_angle(t);
    return Operator(pulse.omega_x(t) * (jx - (0.5 / std::cos(angle)) * jz));
  };
  return integrate_schrodinger(h, psi0, t0, tf, cfg, sample_times);
}

double fidelity(const State& a, const State& b) { return std::norm(inner(a, b)); }

double discrete_geometric_phase(std::span<const State> samples, bool closed) {
  if (samples.size() < 3) throw ValidationError("discrete_geometric_phase: need >= 3 samples");
  double phase = 0.0;
  auto link = [&](const State& a, const State& b, std::size_t k) {
    const Complex overlap = inner(a, b);
    if (!(std::abs(overlap) > 0.9)) {
      throw OverlapTooSmall("discrete_geometric_phase",
                            "overlap " + std::to_string(std::abs(overlap)) + " at link " +
                                std::to_string(k) + "; sampling too coarse");
    }
    phase -= std::arg(overlap);
  };
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) link(samples[k], samples[k + 1], k);
  if (closed) link(samples.back(), samples.front(), samples.size() - 1);
  return phase;
}

std::vector<State> sample_invariant_eigenstates(const PulseSpec& pulse, const Spin& spin, double m,
                                                double t0, double tf, std::size_t n,
                                                Sampling sampling) {
  if (n < 3) throw ValidationError("sample_invariant_eigenstates: need >= 3 samples");
  std::vector<State> out;
  out.reserve(n);
  const double a0 = pulse.sweep_angle(t0);
  const double a1 = pulse.sweep_angle(tf);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(n - 1);
    if (sampling == Sampling::sweep_angle) {
      out.push_back(invariant_eigenstate_at_angle(spin, a0 + (a1 - a0) * u, m));
    } else {
      out.push_back(invariant_eigenstate(pulse, spin, t0 + (tf - t0) * u, m));
    }
  }
  return out;
}

namespace {

double dynamical_by_quadrature(const PulseSpec& pulse, double m, double t0, double tf) {
  return integrate_adaptive([&](double t) { return -diabatic_level(pulse, m, t); }, t0, tf,
                            kQuadratureTol)
      .value;
}

}  // namespace

PhaseBreakdown discrete_phase_breakdown(const PulseSpec& pulse, const Spin& spin, double m,
                                        double t0, double tf, std::size_t n, bool closed) {
  const std::vector<State> samples = sample_invariant_eigenstates(pulse, spin, m, t0, tf, n);
  PhaseBreakdown out;
  out.m = m;
  out.t0 = t0;
  out.tf = tf;
  out.method = PhaseMethod::discrete_overlap;
  out.geometric = discrete_geometric_phase(samples, closed);
  out.dynamical = dynamical_by_quadrature(pulse, m, t0, tf);
  out.total = out.geometric + out.dynamical;
  return out;
}

PhaseBreakdown ode_phase_breakdown(const PulseSpec& pulse, const Spin& spin, double m, double t0,
                                   double tf, const IntegratorConfig& cfg, std::size_t samples) {
  if (samples < 2) throw ValidationError("ode_phase_breakdown: need >= 2 samples");
  std::vector<double> times(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    times[k] = t0 + (tf - t0) * static_cast<double>(k + 1) / static_cast<double>(samples);
  }
  times.back() = tf;
  const State start = invariant_eigenstate(pulse, spin, t0, m);
  const TrajectoryRecord rec = integrate_schrodinger(pulse, spin, start, t0, tf, cfg, times);

  // unwrap arg<phi_m(t)|psi(t)> along the samples
  double total = 0.0;
  double previous = 0.0;
  for (std::size_t k = 1; k < rec.times.size(); ++k) {
    const double current =
        std::arg(inner(invariant_eigenstate(pulse, spin, rec.times[k], m), rec.states[k]));
    total += std::remainder(current - previous, 2.0 * std::numbers::pi);
    previous = current;
  }
  PhaseBreakdown out;
  out.m = m;
  out.t0 = t0;
  out.tf = tf;
  out.method = PhaseMethod::ode;
  out.total = total;
  out.dynamical = dynamical_by_quadrature(pulse, m, t0, tf);
  out.geometric = out.total - out.dynamical;
  return out;
}

}  // namespace secdrive
