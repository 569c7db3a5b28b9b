#include "secdrive/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "secdrive/errors.hpp"

namespace secdrive {

namespace {

bool is_integral(double x) { return std::abs(x - std::round(x)) < 1e-12; }

}  // namespace

Spin::Spin(double j) {
  const double twice = 2.0 * j;
  if (!std::isfinite(j) || twice < -1e-12 || !is_integral(twice)) {
    throw ValidationError("spin label j must be a non-negative half-integer, got " +
                          std::to_string(j));
  }
  twice_j_ = static_cast<int>(std::lround(twice));
}

Spin Spin::from_twice_j(int twice_j) {
  if (twice_j < 0) {
    throw ValidationError("2j must be non-negative, got " + std::to_string(twice_j));
  }
  return Spin(twice_j, 0);
}

std::size_t Spin::index_of(double m) const {
  const double offset = j() - m;
  if (!std::isfinite(m) || !is_integral(offset) || offset < -1e-12 ||
      offset > twice_j_ + 1e-12) {
    throw ValidationError("magnetic number m=" + std::to_string(m) +
                          " is not in {-j..j} for j=" + std::to_string(j()));
  }
  return static_cast<std::size_t>(std::lround(offset));
}

std::vector<double> Spin::magnetic_numbers() const {
  std::vector<double> ms(dim());
  for (std::size_t k = 0; k < ms.size(); ++k) ms[k] = m_at(k);
  return ms;
}

Operator angular_momentum(const Spin& spin, Axis axis) {
  const auto d = static_cast<Eigen::Index>(spin.dim());
  const double j = spin.j();
  Operator out = Operator::Zero(d, d);
  if (axis == Axis::z) {
    for (Eigen::Index k = 0; k < d; ++k) out(k, k) = spin.m_at(static_cast<std::size_t>(k));
    return out;
  }
  // <m+1|J+|m> sits at (k-1, k) where row k holds m.
  Operator raise = Operator::Zero(d, d);
  for (Eigen::Index k = 1; k < d; ++k) {
    const double m = spin.m_at(static_cast<std::size_t>(k));
    raise(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Operator lower = raise.adjoint();
  if (axis == Axis::x) return 0.5 * (raise + lower);
  return Complex(0.0, -0.5) * (raise - lower);
}

Operator identity(const Spin& spin) {
  const auto d = static_cast<Eigen::Index>(spin.dim());
  return Operator::Identity(d, d);
}

State basis_state(const Spin& spin, double m) {
  State s = State::Zero(static_cast<Eigen::Index>(spin.dim()));
  s(static_cast<Eigen::Index>(spin.index_of(m))) = 1.0;
  return s;
}

Operator commutator(const Operator& a, const Operator& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw ValidationError("commutator: dimension mismatch");
  }
  return a * b - b * a;
}

Operator mat_exp(const Operator& a) {
  if (a.rows() != a.cols()) throw ValidationError("mat_exp: matrix is not square");
  if (!a.allFinite()) throw ValidationError("mat_exp: non-finite entries");
  return a.exp();
}

EigenDecomposition eigh(const Operator& a) {
  if (a.rows() != a.cols()) throw ValidationError("eigh: matrix is not square");
  if (!is_hermitian(a, 1e-10)) throw ValidationError("eigh: input is not Hermitian");
  const Operator sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("eigh", "self-adjoint eigensolver did not converge");
  }
  EigenDecomposition out;
  out.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
  out.eigenvectors = solver.eigenvectors();
  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) {
    auto col = out.eigenvectors.col(c);
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      // strict comparison with a small margin keeps the lowest row on ties
      const double mag = std::abs(col(r));
      if (mag > best_abs + 1e-12) {
        best_abs = mag;
        best = r;
      }
    }
    col *= std::conj(col(best)) / std::abs(col(best));
  }
  return out;
}

bool is_hermitian(const Operator& a, double tol) {
  return a.rows() == a.cols() && max_abs_diff(a, a.adjoint()) <= tol;
}

bool is_unitary(const Operator& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs_diff(u.adjoint() * u, Operator::Identity(u.rows(), u.cols())) <= tol;
}

double max_abs_diff(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("max_abs_diff: dimension mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace secdrive
