#pragma once

// Test-only reference computations. Nothing here calls into the library's
// numerical kernels, so the checks stay independent of the paths they test.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Naive triple-loop product.
inline Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

/// Spin matrices written entry by entry from the ladder matrix elements.
inline Matrix spin_matrix(double j, char axis) {
  const int d = static_cast<int>(std::lround(2 * j)) + 1;
  Matrix out = Matrix::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    const double m = j - r;
    if (axis == 'z') out(r, r) = m;
    if (r + 1 < d) {
      const double lower_m = m - 1;  // column r+1 holds m-1
      const double plus = std::sqrt(j * (j + 1) - lower_m * (lower_m + 1));
      if (axis == 'x') {
        out(r, r + 1) = 0.5 * plus;
        out(r + 1, r) = 0.5 * plus;
      } else if (axis == 'y') {
        out(r, r + 1) = Complex(0, -0.5 * plus);
        out(r + 1, r) = Complex(0, 0.5 * plus);
      }
    }
  }
  return out;
}

/// Taylor series with scaling and squaring; long-double accumulation.
inline Matrix taylor_exp(const Matrix& a) {
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.25) {
    norm /= 2;
    ++squarings;
  }
  const Matrix scaled = a / std::pow(2.0, squarings);
  const Eigen::Index d = a.rows();
  Matrix term = Matrix::Identity(d, d);
  Matrix sum = Matrix::Identity(d, d);
  for (int k = 1; k < 40; ++k) {
    term = multiply(term, scaled) / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = multiply(sum, sum);
  return sum;
}

/// Composite Simpson on n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return acc * h / 3.0;
}

inline double frobenius(const Matrix& a) { return a.norm(); }

/// Deterministic generator for property-style loops.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
