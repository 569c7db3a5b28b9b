#pragma once

// Spin-j operators and the dense complex kernel shared by the other modules.
// Basis ordering is m = j, j-1, ..., -j (row 0 is the highest weight).

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace secdrive {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using State = Eigen::VectorXcd;

enum class Axis { x, y, z };

/// Representation label of su(2). Stored as 2j so half-integers are exact.
class Spin {
 public:
  /// Throws ValidationError unless 2j is a non-negative integer.
  explicit Spin(double j);
  static Spin from_twice_j(int twice_j);

  double j() const noexcept { return 0.5 * twice_j_; }
  int twice_j() const noexcept { return twice_j_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(twice_j_) + 1; }

  /// Row of |m> in the canonical basis. Throws ValidationError for an invalid m.
  std::size_t index_of(double m) const;
  double m_at(std::size_t index) const noexcept { return j() - static_cast<double>(index); }
  /// Magnetic quantum numbers in basis order, j first.
  std::vector<double> magnetic_numbers() const;

  friend bool operator==(const Spin&, const Spin&) = default;

 private:
  explicit Spin(int twice_j, int) : twice_j_(twice_j) {}
  int twice_j_ = 1;
};

Operator angular_momentum(const Spin& spin, Axis axis);
Operator identity(const Spin& spin);
/// |m> in the canonical basis.
State basis_state(const Spin& spin, double m);

/// AB - BA. Throws ValidationError on dimension mismatch.
Operator commutator(const Operator& a, const Operator& b);

/// Matrix exponential (scaling and squaring with Pade). Throws ValidationError
/// on non-square or non-finite input.
Operator mat_exp(const Operator& a);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Operator eigenvectors;            // columns
};

/// Hermitian eigensolver. Each eigenvector is phased so that its largest-modulus
/// component is real and positive (lowest row wins ties). Throws
/// ValidationError if `a` is not Hermitian within 1e-10.
EigenDecomposition eigh(const Operator& a);

bool is_hermitian(const Operator& a, double tol = 1e-12);
bool is_unitary(const Operator& u, double tol = 1e-10);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const Operator& a, const Operator& b);

/// <a|b>
inline Complex inner(const State& a, const State& b) { return a.dot(b); }

}  // namespace secdrive
