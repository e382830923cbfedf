#include "qwalk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qwalk {

namespace {

Eigen::Index product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1},
                         std::multiplies<>());
}

std::string defect_message(double defect) {
  std::ostringstream os;
  os << "operator is not Hermitian: max |A - A^dagger| = " << defect;
  return os.str();
}

}  // namespace

NonHermitianError::NonHermitianError(double defect)
    : std::invalid_argument(defect_message(defect)), defect_(defect) {}

Operator::Operator(Matrix m) : Operator(std::move(m), {}) {}

Operator::Operator(Matrix m, std::vector<int> dims) : m_(std::move(m)), dims_(std::move(dims)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("Operator: matrix must be square");
  }
  if (dims_.empty()) {
    dims_ = {static_cast<int>(m_.rows())};
  }
  if (std::any_of(dims_.begin(), dims_.end(), [](int d) { return d < 1; })) {
    throw std::invalid_argument("Operator: subsystem dimensions must be positive");
  }
  if (product(dims_) != m_.rows()) {
    throw std::invalid_argument("Operator: product of dims does not match side length");
  }
}

Operator Operator::identity(std::vector<int> dims) {
  const auto n = product(dims);
  return Operator(Matrix::Identity(n, n), std::move(dims));
}

Operator Operator::zero(std::vector<int> dims) {
  const auto n = product(dims);
  return Operator(Matrix::Zero(n, n), std::move(dims));
}

Operator Operator::adjoint() const { return Operator(m_.adjoint(), dims_); }

double Operator::hermiticity_defect() const {
  if (m_.size() == 0) return 0.0;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double Operator::unitarity_defect() const {
  return operator_norm(Matrix(m_.adjoint() * m_ - Matrix::Identity(side(), side())));
}

Operator& Operator::operator+=(const Operator& other) {
  if (other.side() != side()) throw std::invalid_argument("Operator +: size mismatch");
  m_ += other.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  if (other.side() != side()) throw std::invalid_argument("Operator -: size mismatch");
  m_ -= other.m_;
  return *this;
}

Operator& Operator::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  if (a.side() != b.side()) throw std::invalid_argument("Operator *: size mismatch");
  return Operator(a.m_ * b.m_, a.dims_);
}

bool SVDTriple::is_zero(Eigen::Index j) const { return singular_values(j) <= zero_threshold(); }

double SVDTriple::zero_threshold() const {
  if (singular_values.size() == 0) return 0.0;
  const double smax = singular_values.maxCoeff();
  // An all-zero matrix has every singular value zero.
  return smax > 0.0 ? kZeroSingularRel * smax : 0.0;
}

Matrix SVDTriple::reconstruct() const {
  return left * singular_values.cast<cplx>().asDiagonal() * right.adjoint();
}

Operator kron(const Operator& a, const Operator& b) {
  const auto& ma = a.matrix();
  const auto& mb = b.matrix();
  Matrix out(ma.rows() * mb.rows(), ma.cols() * mb.cols());
  for (Eigen::Index i = 0; i < ma.rows(); ++i) {
    for (Eigen::Index j = 0; j < ma.cols(); ++j) {
      out.block(i * mb.rows(), j * mb.cols(), mb.rows(), mb.cols()) = ma(i, j) * mb;
    }
  }
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return Operator(std::move(out), std::move(dims));
}

Operator kron(std::span<const Operator> factors) {
  if (factors.empty()) throw std::invalid_argument("kron: no factors");
  Operator out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

Operator matexp_hermitian(const Operator& h, double t, double tol) {
  const double defect = h.hermiticity_defect();
  if (defect >= tol) throw NonHermitianError(defect);
  const Matrix sym = 0.5 * (h.matrix() + h.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("matexp_hermitian: eigendecomposition failed");
  }
  Vector phases(eig.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, -eig.eigenvalues()(i) * t);
  }
  const Matrix& v = eig.eigenvectors();
  return Operator(v * phases.asDiagonal() * v.adjoint(), h.dims());
}

SVDTriple svd(const Operator& a) {
  Eigen::BDCSVD<Matrix> dec(a.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return SVDTriple{dec.singularValues(), dec.matrixU(), dec.matrixV()};
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> dec(a);
  return dec.singularValues()(0);
}

double operator_norm(const Operator& a) { return operator_norm(a.matrix()); }

double average_gate_fidelity(const Matrix& m, const Matrix& target) {
  if (m.rows() != target.rows() || m.cols() != target.cols() || m.rows() != m.cols()) {
    throw std::invalid_argument("average_gate_fidelity: shape mismatch");
  }
  const double n = static_cast<double>(m.rows());
  const cplx overlap = (m * target.adjoint()).trace();
  const double purity = (m.adjoint() * m).trace().real();
  return (std::norm(overlap) + purity) / (n * (n + 1.0));
}

double average_gate_fidelity_diag(const Matrix& m, const Vector& target_diag) {
  if (m.rows() != target_diag.size() || m.rows() != m.cols()) {
    throw std::invalid_argument("average_gate_fidelity_diag: shape mismatch");
  }
  const double n = static_cast<double>(m.rows());
  cplx overlap = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) overlap += m(i, i) * std::conj(target_diag(i));
  const double purity = m.cwiseAbs2().sum();
  return (std::norm(overlap) + purity) / (n * (n + 1.0));
}

Eigen::Index flat_index(std::span<const int> digits, std::span<const int> dims) {
  if (digits.size() != dims.size()) throw std::invalid_argument("flat_index: rank mismatch");
  Eigen::Index idx = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= dims[i]) {
      throw std::out_of_range("flat_index: digit out of range");
    }
    idx = idx * dims[i] + digits[i];
  }
  return idx;
}

std::vector<int> digits_of(Eigen::Index index, std::span<const int> dims) {
  std::vector<int> digits(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    digits[i] = static_cast<int>(index % dims[i]);
    index /= dims[i];
  }
  return digits;
}

Operator embed_site(const Matrix& local, int site, const std::vector<int>& dims) {
  if (site < 0 || site >= static_cast<int>(dims.size())) {
    throw std::out_of_range("embed_site: site out of range");
  }
  if (local.rows() != dims[site]) throw std::invalid_argument("embed_site: local dimension mismatch");
  Eigen::Index left = 1, right = 1;
  for (int i = 0; i < site; ++i) left *= dims[i];
  for (std::size_t i = site + 1; i < dims.size(); ++i) right *= dims[i];
  const Eigen::Index d = dims[site];
  const Eigen::Index n = left * d * right;
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        const cplx v = local(a, b);
        if (v == cplx{}) continue;
        for (Eigen::Index r = 0; r < right; ++r) {
          out((l * d + a) * right + r, (l * d + b) * right + r) = v;
        }
      }
    }
  }
  return Operator(std::move(out), dims);
}

namespace pauli {

Matrix identity() { return Matrix::Identity(2, 2); }

Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix y() {
  Matrix m(2, 2);
  m << 0.0, cplx(0, -1), cplx(0, 1), 0.0;
  return m;
}

Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Matrix minus() { return plus().adjoint(); }

}  // namespace pauli

Matrix annihilation(int d) {
  if (d < 1) throw std::invalid_argument("annihilation: dimension must be positive");
  Matrix b = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

Matrix phase_z(double a) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, a);
  m(1, 1) = std::polar(1.0, -a);
  return m;
}

}  // namespace qwalk
