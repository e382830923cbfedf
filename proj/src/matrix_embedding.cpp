#include "qwalk/matrix_embedding.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qwalk::embedding {

using std::numbers::pi;

Matrix RotationTarget::unitary() const {
  const auto d = projector.rows();
  const Matrix id = Matrix::Identity(d, d);
  return std::polar(1.0, -2.0 * phi) * projector - (id - projector);
}

EmbeddedSystem embed(const Operator& a) {
  const auto d = a.side();
  Matrix h = Matrix::Zero(2 * d, 2 * d);
  h.topRightCorner(d, d) = a.matrix();
  h.bottomLeftCorner(d, d) = a.matrix().adjoint();
  std::vector<int> dims{2};
  dims.insert(dims.end(), a.dims().begin(), a.dims().end());

  EmbeddedSystem sys{a, Operator(std::move(h), std::move(dims)), svd(a), {}};
  const auto& dec = sys.decomposition;
  sys.blocks.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < dec.singular_values.size(); ++j) {
    sys.blocks.push_back(Block{dec.singular_values(j), dec.left.col(j), dec.right.col(j), dec.is_zero(j)});
  }
  return sys;
}

Operator evolve_embedded(const EmbeddedSystem& sys, double t) { return matexp_hermitian(sys.h, t); }

Operator evolve_blocks(const EmbeddedSystem& sys, double t) {
  const auto d = sys.system_dim();
  Matrix u = Matrix::Zero(2 * d, 2 * d);
  for (const auto& b : sys.blocks) {
    const double value = b.dark ? 0.0 : b.value;
    const double c = std::cos(value * t);
    const cplx s(0.0, -std::sin(value * t));
    u.topLeftCorner(d, d) += c * b.left * b.left.adjoint();
    u.topRightCorner(d, d) += s * b.left * b.right.adjoint();
    u.bottomLeftCorner(d, d) += s * b.right * b.left.adjoint();
    u.bottomRightCorner(d, d) += c * b.right * b.right.adjoint();
  }
  return Operator(std::move(u), sys.h.dims());
}

Operator rotation_sequence_from_step(const Operator& interaction, double k, int n) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("rotation_sequence: N must be a positive odd integer");
  const auto d = interaction.side() / 2;
  if (interaction.dims().empty() || interaction.dims().front() != 2) {
    throw std::invalid_argument("rotation_sequence: first tensor factor must be the qubit ancilla");
  }
  // Ancilla z rotations are diagonal; apply them as row scalings.
  auto apply_z = [d](Matrix& m, double a) {
    m.topRows(d) *= std::polar(1.0, a);
    m.bottomRows(d) *= std::polar(1.0, -a);
  };
  const double step = 2.0 * pi / n;
  Matrix w = Matrix::Identity(2 * d, 2 * d);
  for (int m = 1; m <= 2 * n; ++m) {
    w = interaction.matrix() * w;
    apply_z(w, k + m * step);
  }
  return Operator(std::move(w), interaction.dims());
}

Operator rotation_sequence(const EmbeddedSystem& sys, double t, double k, int n) {
  return rotation_sequence_from_step(evolve_embedded(sys, t), k, n);
}

Matrix ancilla_one_block(const Operator& op) {
  const auto d = op.side() / 2;
  return op.matrix().topLeftCorner(d, d);
}

Matrix ancilla_zero_block(const Operator& op) {
  const auto d = op.side() / 2;
  return op.matrix().bottomRightCorner(d, d);
}

namespace {

Matrix dark_projector(const EmbeddedSystem& sys, bool left) {
  const auto d = sys.system_dim();
  Matrix p = Matrix::Zero(d, d);
  for (const auto& b : sys.blocks) {
    if (!b.dark) continue;
    const Vector& v = left ? b.left : b.right;
    p += v * v.adjoint();
  }
  return p;
}

}  // namespace

Matrix dark_left_projector(const EmbeddedSystem& sys) { return dark_projector(sys, true); }
Matrix dark_right_projector(const EmbeddedSystem& sys) { return dark_projector(sys, false); }

RotationTarget rotation_target(const EmbeddedSystem& sys, double k, int n) {
  return RotationTarget{dark_left_projector(sys), pi - n * k};
}

Matrix ideal_rotation(const EmbeddedSystem& sys, double k, int n) { return rotation_target(sys, k, n).unitary(); }

double error_bound(double value, double t, int n) { return 2.0 * std::pow(std::abs(std::cos(value * t)), n); }

}  // namespace qwalk::embedding
