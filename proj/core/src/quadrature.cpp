#include "secdrive/quadrature.hpp"

#include <array>
#include <cmath>

#include "secdrive/errors.hpp"

namespace secdrive {

namespace {

constexpr int kMaxDepth = 60;

// 15-point Kronrod abscissae on [-1, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Estimate {
  double kronrod;
  double gauss;
};

Estimate gk15(const std::function<double(double)>& f, double a, double b, long& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kXgk[static_cast<std::size_t>(k)];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[static_cast<std::size_t>(k)] * pair;
    if (k % 2 == 1) gauss += kWg[static_cast<std::size_t>(k / 2)] * pair;
  }
  evals += 15;
  if (!std::isfinite(kronrod)) {
    throw NonConvergence("adaptive_quadrature", "integrand is not finite on the interval");
  }
  return {kronrod * half, gauss * half};
}

void refine(const std::function<double(double)>& f, double a, double b, double tol_density,
            const Estimate& est, int depth, QuadratureResult& out) {
  const double err = std::abs(est.kronrod - est.gauss);
  const double allowed = tol_density * (b - a);
  // accept once within budget or once the estimate is at round-off level
  if (err <= allowed || err <= 50.0 * 2.2e-16 * std::abs(est.kronrod)) {
    out.value += est.kronrod;
    out.error_estimate += err;
    return;
  }
  if (depth >= kMaxDepth) {
    throw NonConvergence("adaptive_quadrature", "no convergence after 60 refinement levels");
  }
  const double mid = 0.5 * (a + b);
  const Estimate left = gk15(f, a, mid, out.evaluations);
  const Estimate right = gk15(f, mid, b, out.evaluations);
  refine(f, a, mid, tol_density, left, depth + 1, out);
  refine(f, mid, b, tol_density, right, depth + 1, out);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tol) {
  QuadratureResult out;
  if (a == b) return out;
  if (!(tol > 0.0)) throw ValidationError("adaptive_quadrature: tolerance must be positive");
  if (b < a) {
    QuadratureResult flipped = integrate_adaptive(f, b, a, tol);
    flipped.value = -flipped.value;
    return flipped;
  }
  const Estimate whole = gk15(f, a, b, out.evaluations);
  refine(f, a, b, tol / (b - a), whole, 0, out);
  return out;
}

}  // namespace secdrive
