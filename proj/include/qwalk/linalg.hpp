#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qwalk {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance used for structural assertions (hermiticity, unitarity, ...).
inline constexpr double kDefaultTol = 1e-9;

/// Relative threshold below which a singular value counts as zero.
inline constexpr double kZeroSingularRel = 1e-12;

/// Raised when an operation requires a Hermitian operator and gets something else.
class NonHermitianError : public std::invalid_argument {
 public:
  explicit NonHermitianError(double defect);
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Dense square complex matrix together with its tensor-factor structure.
///
/// The product of `dims()` always equals the side length. Every state,
/// Hamiltonian and unitary in the library is carried by this type.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix m);
  Operator(Matrix m, std::vector<int> dims);

  static Operator identity(std::vector<int> dims);
  static Operator zero(std::vector<int> dims);

  const Matrix& matrix() const noexcept { return m_; }
  const std::vector<int>& dims() const noexcept { return dims_; }
  Eigen::Index side() const noexcept { return m_.rows(); }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  Operator adjoint() const;

  /// max-abs entry of A - A^dagger
  double hermiticity_defect() const;
  /// operator norm of U^dagger U - I
  double unitarity_defect() const;
  bool is_hermitian(double tol = kDefaultTol) const { return hermiticity_defect() < tol; }
  bool is_unitary(double tol = kDefaultTol) const { return unitarity_defect() < tol; }

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(cplx s);

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }

 private:
  Matrix m_;
  std::vector<int> dims_;
};

/// Singular value decomposition A = sum_J value_J |left_J><right_J|.
struct SVDTriple {
  RealVector singular_values;  // descending, zeros kept
  Matrix left;                 // column J is |l_J>
  Matrix right;                // column J is |r_J>

  /// Singular values below kZeroSingularRel * max are treated as zero.
  bool is_zero(Eigen::Index j) const;
  double zero_threshold() const;
  Matrix reconstruct() const;
};

Operator kron(const Operator& a, const Operator& b);
Operator kron(std::span<const Operator> factors);

/// exp(-i h t) through the eigendecomposition of h.
Operator matexp_hermitian(const Operator& h, double t, double tol = kDefaultTol);

SVDTriple svd(const Operator& a);

/// Largest singular value.
double operator_norm(const Operator& a);
double operator_norm(const Matrix& a);

/// Average gate fidelity of a (possibly non-unitary) restriction M against
/// the unitary target U on an n-dimensional computational space:
/// (|tr(M U^dagger)|^2 + tr(M^dagger M)) / (n (n + 1)).
double average_gate_fidelity(const Matrix& m, const Matrix& target);

/// Same, for diagonal targets given as their diagonal.
double average_gate_fidelity_diag(const Matrix& m, const Vector& target_diag);

/// Row-major flat index of a multi-digit basis label.
Eigen::Index flat_index(std::span<const int> digits, std::span<const int> dims);
std::vector<int> digits_of(Eigen::Index index, std::span<const int> dims);

/// Places a local operator on one site of a tensor product, identity elsewhere.
Operator embed_site(const Matrix& local, int site, const std::vector<int>& dims);

/// Qubit operators. Basis ordering is {|1>, |0>}: index 0 is |1>, so
/// sigma_z |1> = +|1> and sigma_plus = |1><0| is the usual upper-right matrix.
namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
Matrix plus();
Matrix minus();
}  // namespace pauli

/// Truncated bosonic annihilation operator sum_n sqrt(n) |n-1><n| on d levels,
/// natural ordering |0>, |1>, ..., |d-1>.
Matrix annihilation(int d);

/// exp(i a sigma_z) on the {|1>,|0>} ordering.
Matrix phase_z(double a);

}  // namespace qwalk
