#include "secdrive/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "secdrive/adiabaticity.hpp"
#include "secdrive/analytic.hpp"
#include "secdrive/errors.hpp"
#include "secdrive/numerics.hpp"
#include "secdrive/quadrature.hpp"

namespace secdrive {

using std::numbers::pi;

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw Error("sweep validation failed: " + what);
}

std::string describe_number(double v) { return format_number(v); }

}  // namespace

const std::vector<double>& SweepResult::column(const std::string& name) const {
  for (const auto& [key, values] : series) {
    if (key == name) return values;
  }
  throw ValidationError("no series named '" + name + "'");
}

void SweepResult::validate() const {
  for (const auto& [name, values] : series) {
    check(values.size() == axis_values.size(), "series " + name + " has the wrong length");
    for (double v : values) check(std::isfinite(v), "series " + name + " has a non-finite value");
  }
  for (double v : axis_values) check(std::isfinite(v), "axis has a non-finite value");
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << result.axis_name;
  for (const auto& [name, values] : result.series) out << ',' << name;
  out << '\n';
  for (std::size_t row = 0; row < result.axis_values.size(); ++row) {
    out << format_number(result.axis_values[row]);
    for (const auto& [name, values] : result.series) out << ',' << format_number(values[row]);
    out << '\n';
  }
}

nlohmann::json to_json(const SweepResult& result) {
  nlohmann::ordered_json series = nlohmann::ordered_json::object();
  for (const auto& [name, values] : result.series) series[name] = values;
  nlohmann::json out;
  out["axis_name"] = result.axis_name;
  out["axis_values"] = result.axis_values;
  out["series"] = nlohmann::json::parse(series.dump());
  out["metadata"] = result.metadata;
  return out;
}

std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SECDRIVE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) hw = std::min(hw, static_cast<std::size_t>(cap));
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      // strided assignment; results land in caller-owned slots
      for (std::size_t i = w; i < n; i += workers) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

double plot_truncation() { return 1e-3 * pi; }

std::vector<double> symmetric_q_grid(double delta, std::size_t n) {
  if (n < 2) throw ValidationError("grid needs at least 2 points");
  const double edge = pi - delta;
  const double denom = static_cast<double>(n - 1);
  std::vector<double> q(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double offset = 2.0 * static_cast<double>(k) - denom;
    q[k] = edge * offset / denom;
  }
  return q;
}

SweepResult run_field_and_levels(double nu, std::size_t n) {
  const PulseSpec pulse = PulseSpec::secant(nu);
  const Spin half(0.5);

  const Operator h0 = hamiltonian(pulse, half, 0.0);
  check(std::abs(h0(0, 0).real() / nu - (-0.25)) < 1e-12, "Omega_z(0)/nu != -1/2");
  const std::vector<double> levels0 = diabatic_levels(pulse, half, 0.0);
  check(std::abs(levels0[0] - levels0[1] + nu) < 1e-12 * std::max(1.0, nu),
        "E_+(0) - E_-(0) != -nu");

  SweepResult out;
  out.axis_name = "q";
  out.axis_values = symmetric_q_grid(plot_truncation(), n);
  std::vector<double> field(n), e_plus(n), e_minus(n);
  parallel_for(n, [&](std::size_t k) {
    const double t = out.axis_values[k] / nu;
    field[k] = -0.5 / std::cos(pulse.sweep_angle(t));
    const std::vector<double> e = diabatic_levels(pulse, half, t);
    e_plus[k] = e[0] / nu;
    e_minus[k] = e[1] / nu;
  });
  out.series = {{"omega_z_over_nu", field}, {"E_plus_over_nu", e_plus},
                {"E_minus_over_nu", e_minus}};
  out.metadata = {{"nu", describe_number(nu)},
                  {"j", "0.5"},
                  {"n", std::to_string(n)},
                  {"delta_plot", describe_number(plot_truncation())}};
  out.validate();
  return out;
}

SweepResult run_bloch_path(double nu, std::size_t n, double delta) {
  if (n < 3) throw ValidationError("run_bloch_path: need n >= 3");
  const PulseSpec pulse = PulseSpec::secant(nu);

  const BlochPoint mid = bloch_angles(pulse, 0.0);
  check(std::abs(mid.theta - pi / 2) < 1e-12 && std::abs(mid.phi - pi) < 1e-12,
        "midpoint is not (pi/2, pi)");

  SweepResult out;
  out.axis_name = "q";
  out.axis_values = symmetric_q_grid(delta, n);
  std::vector<BlochPoint> path(n);
  std::vector<double> theta(n), phi(n), rx(n), ry(n), rz(n);
  parallel_for(n, [&](std::size_t k) {
    path[k] = bloch_angles(pulse, out.axis_values[k] / nu);
    const auto r = path[k].unit_vector();
    theta[k] = path[k].theta;
    phi[k] = path[k].phi;
    rx[k] = r[0];
    ry[k] = r[1];
    rz[k] = r[2];
  });
  const LoopGeometry loop = solid_angle(path, true);
  check(theta.front() < 2.0 * delta && theta.back() < 2.0 * delta,
        "endpoints are not near the pole theta = 0");
  // the polygon approximation converges as 1/n^2
  const double allowed = std::max(1e-6, 200.0 / (static_cast<double>(n) * n));
  check(std::abs(loop.solid_angle - (pi - 2.0)) < allowed + delta,
        "solid angle " + describe_number(loop.solid_angle) + " differs from pi - 2");

  out.series = {{"theta", theta}, {"phi", phi}, {"Rx", rx}, {"Ry", ry}, {"Rz", rz}};
  out.metadata = {{"nu", describe_number(nu)},
                  {"n", std::to_string(n)},
                  {"delta", describe_number(delta)},
                  {"solid_angle", describe_number(loop.solid_angle)},
                  {"signed_solid_angle", describe_number(loop.signed_solid_angle)},
                  {"orientation", loop.orientation == Orientation::clockwise ? "clockwise"
                                                                             : "counterclockwise"}};
  out.validate();
  return out;
}

namespace {

// Phi_+^g over q in (-(pi - delta), pi - delta) and the two truncated tails,
// both by quadrature of the closed-form kernel.
struct TruncatedPhase {
  double phase;
  double tail;
};

TruncatedPhase truncated_phase(const PulseSpec& pulse, double delta) {
  const Spin half(0.5);
  const double nu = pulse.nu();
  auto kernel = [&](double t) { return geometric_phase_kernel(pulse, half, 0.5, t); };
  const double inner_edge = (pi - delta) / nu;
  const double outer_edge = pi / nu;
  TruncatedPhase out;
  out.phase = integrate_adaptive(kernel, -inner_edge, inner_edge, 1e-12).value;
  // tail is O(delta^4)
  const double tail_tol = std::max(1e-14 * std::pow(delta, 4), 1e-300);
  out.tail = integrate_adaptive(kernel, inner_edge, outer_edge, tail_tol).value +
             integrate_adaptive(kernel, -outer_edge, -inner_edge, tail_tol).value;
  return out;
}

}  // namespace

std::vector<double> default_truncation_deltas() {
  std::vector<double> deltas(60);
  const double lo = std::log(1e-3 * pi);
  const double hi = std::log(0.3 * pi);
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    deltas[k] = std::exp(lo + (hi - lo) * static_cast<double>(k) / 59.0);
  }
  return deltas;
}

SweepResult run_truncation_sweep(double nu, const std::vector<double>& deltas) {
  const PulseSpec pulse = PulseSpec::secant(nu);
  for (double d : deltas) {
    if (!(d > 0.0 && d < pi / 2)) throw ValidationError("truncation delta must lie in (0, pi/2)");
  }
  const double loop_phase = 0.5 * (pi - 2.0);

  const TruncatedPhase tenth = truncated_phase(pulse, pi / 10);
  check(tenth.tail / loop_phase < 1e-3, "relative error at delta = pi/10 is not below 1e-3");

  SweepResult out;
  out.axis_name = "delta";
  out.axis_values = deltas;
  const std::size_t n = deltas.size();
  std::vector<double> rel(n), phase(n);
  parallel_for(n, [&](std::size_t k) {
    const TruncatedPhase tp = truncated_phase(pulse, deltas[k]);
    rel[k] = tp.tail / loop_phase;
    phase[k] = tp.phase;
  });
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return deltas[a] < deltas[b]; });
  for (std::size_t k = 1; k < n; ++k) {
    if (deltas[order[k]] > deltas[order[k - 1]]) {
      check(rel[order[k]] > rel[order[k - 1]], "relative error is not monotone in delta");
    }
  }
  out.series = {{"relative_error", rel}, {"geometric_phase", phase}};
  out.metadata = {{"nu", describe_number(nu)},
                  {"n", std::to_string(n)},
                  {"loop_phase", describe_number(loop_phase)},
                  {"quadrature_tol", "1e-12"}};
  out.validate();
  return out;
}

SweepResult run_adiabaticity(double nu, std::size_t n) {
  const PulseSpec pulse = PulseSpec::secant(nu);
  const Spin half(0.5);
  check(std::abs(fidelity_loss_closed_form(pi / 2) - 0.25) < 1e-12,
        "fidelity loss at q = pi/2 is not 1/4");
  check(std::abs(reversed_model_fidelity_loss(pulse, pi / (2 * nu), 0.5) - 0.25) < 1e-10,
        "reversed-model basis overlap at q = pi/2 is not 3/4");

  SweepResult out;
  out.axis_name = "q";
  out.axis_values = symmetric_q_grid(plot_truncation(), n);
  std::vector<double> closed(n), state_route(n), h_route(n), loss(n), loss_closed(n), overlap(n);
  parallel_for(n, [&](std::size_t k) {
    const double q = out.axis_values[k];
    const double t = q / nu;
    const AdiabaticRatio r = adiabatic_condition_ratio(pulse, t);
    closed[k] = r.closed_form;
    state_route[k] = r.state_derivative;
    h_route[k] = r.hamiltonian_derivative;
    loss[k] = reversed_model_fidelity_loss(pulse, t, 0.5);
    loss_closed[k] = fidelity_loss_closed_form(q);
    const AdiabaticFrame frame = adiabatic_frame(pulse, half, t);
    overlap[k] = fidelity(invariant_eigenstate(pulse, half, t, 0.5), frame.states[0]);
  });
  check(*std::max_element(closed.begin(), closed.end()) > 0.05,
        "adiabatic-condition ratio never exceeds 0.05");
  out.series = {{"ratio_closed_form", closed},
                {"ratio_state_derivative", state_route},
                {"ratio_hamiltonian_derivative", h_route},
                {"fidelity_loss", loss},
                {"fidelity_loss_closed_form", loss_closed},
                {"invariant_adiabatic_overlap", overlap}};
  out.metadata = {{"nu", describe_number(nu)},
                  {"j", "0.5"},
                  {"n", std::to_string(n)},
                  {"delta_plot", describe_number(plot_truncation())}};
  out.validate();
  return out;
}

std::vector<PulseSpec> default_universality_envelopes(double delta_prime) {
  EnvelopeShape constant{EnvelopeKind::constant};
  EnvelopeShape gaussian{EnvelopeKind::gaussian};
  gaussian.sigma = 1.0;
  gaussian.t_center = 0.0;
  EnvelopeShape sin2{EnvelopeKind::sin2};
  sin2.period = 2.0 * pi;
  return {sweeping_pulse(constant, 0.0, 2.0 * pi, delta_prime),
          sweeping_pulse(gaussian, -4.0, 4.0, delta_prime),
          sweeping_pulse(sin2, 0.0, 2.0 * pi, delta_prime)};
}

SweepResult run_universality(const std::vector<PulseSpec>& envelopes, double delta_prime,
                             double m, std::size_t n) {
  if (!(delta_prime > 0.0 && delta_prime < pi / 2)) {
    throw ValidationError("delta_prime must lie in (0, pi/2)");
  }
  const Spin half(0.5);
  half.index_of(m);
  for (const PulseSpec& p : envelopes) {
    if (p.is_secant()) throw ValidationError("universality envelopes must be general pulses");
    const TimeWindow w = p.window();
    if (std::abs(p.sweep_angle(w.start) + pi / 2 - delta_prime) > 1e-9 ||
        std::abs(p.sweep_angle(w.end) - pi / 2 + delta_prime) > 1e-9) {
      throw ValidationError("envelope " + p.label() + " does not sweep the matched window");
    }
  }
  const PulseSpec secant = PulseSpec::secant(1.0);
  const double edge = pi - 2.0 * delta_prime;

  const std::size_t rows = envelopes.size() + 1;
  std::vector<double> discrete(rows), time_sampled(rows), quadrature(rows);
  parallel_for(rows, [&](std::size_t k) {
    const PulseSpec& p = k < envelopes.size() ? envelopes[k] : secant;
    const double t0 = k < envelopes.size() ? p.window().start : -edge;
    const double tf = k < envelopes.size() ? p.window().end : edge;
    discrete[k] =
        discrete_geometric_phase(sample_invariant_eigenstates(p, half, m, t0, tf, n), false);
    time_sampled[k] = discrete_geometric_phase(
        sample_invariant_eigenstates(p, half, m, t0, tf, n, Sampling::time), false);
    quadrature[k] = phase_breakdown(p, half, m, t0, tf, PhaseMethod::quadrature).geometric;
  });
  const double closed_form = 2.0 * m * (geometric_antiderivative(edge / 2) -
                                        geometric_antiderivative(-edge / 2));
  for (std::size_t k = 0; k < rows; ++k) {
    check(std::abs(discrete[k] - discrete.back()) < 1e-6,
          "envelope " + std::to_string(k) + " disagrees with the secant reference");
  }
  check(std::abs(quadrature.back() - closed_form) < 1e-8,
        "secant reference quadrature disagrees with the closed form");

  SweepResult out;
  out.axis_name = "envelope_index";
  for (std::size_t k = 0; k < rows; ++k) out.axis_values.push_back(static_cast<double>(k));
  out.series = {{"geometric_phase", discrete},
                {"geometric_phase_time_sampled", time_sampled},
                {"geometric_phase_quadrature", quadrature}};
  std::ostringstream names;
  for (std::size_t k = 0; k < envelopes.size(); ++k) names << envelopes[k].label() << ';';
  names << "secant";
  out.metadata = {{"envelopes", names.str()},
                  {"delta_prime", describe_number(delta_prime)},
                  {"m", describe_number(m)},
                  {"n", std::to_string(n)},
                  {"closed_form", describe_number(closed_form)}};
  out.validate();
  return out;
}

}  // namespace secdrive
