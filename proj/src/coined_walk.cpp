#include "qwalk/coined_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace qwalk::walk {

using std::numbers::pi;

double WalkParams::delta_k() const { return 2.0 * pi / n; }

void WalkParams::validate() const {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("WalkParams: N must be a positive odd integer");
}

Operator coin(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Matrix m(2, 2);
  m << c, cplx(0, -s), cplx(0, -s), c;
  return Operator(std::move(m));
}

Operator shift(double k) { return Operator(phase_z(k)); }

Operator single_step(double theta, double k) { return shift(k) * coin(theta); }

Vec3 chiral_axis(double theta) { return {0.0, std::cos(theta / 2.0), std::sin(theta / 2.0)}; }

BandPoint band_point(double k, double theta, double tol) {
  const double ch = std::cos(theta / 2.0);
  const double sh = std::sin(theta / 2.0);
  const double cos_e = std::clamp(std::cos(k) * ch, -1.0, 1.0);
  const double energy = std::acos(cos_e);
  const double sin_e = std::sin(energy);
  if (sin_e < tol) throw DegeneratePointError("band_point: sin E = 0, axis undefined");
  BandPoint bp;
  bp.energy = energy;
  bp.axis = {std::cos(k) * sh / sin_e, -std::sin(k) * sh / sin_e, std::sin(k) * ch / sin_e};
  bp.chiral_axis = chiral_axis(theta);
  return bp;
}

WindingResult winding_number(double theta, int grid_size, double tol) {
  if (grid_size < 16) throw std::invalid_argument("winding_number: grid_size must be >= 16");
  const double wrapped = std::fmod(std::fmod(theta, 2.0 * pi) + 2.0 * pi, 2.0 * pi);
  if (wrapped < tol || 2.0 * pi - wrapped < tol) return {0, true};

  // Orthonormal frame of the plane perpendicular to A_theta.
  const Vec3 a = chiral_axis(theta);
  const Vec3 e1{1.0, 0.0, 0.0};
  const Vec3 e2{0.0, a[2], -a[1]};

  auto angle_at = [&](double k) {
    const BandPoint bp = band_point(k, theta, 1e-12);
    const double u = bp.axis[0] * e1[0] + bp.axis[1] * e1[1] + bp.axis[2] * e1[2];
    const double v = bp.axis[0] * e2[0] + bp.axis[1] * e2[1] + bp.axis[2] * e2[2];
    return std::atan2(v, u);
  };

  double total = 0.0;
  double prev = angle_at(0.0);
  for (int i = 1; i <= grid_size; ++i) {
    const double cur = angle_at(2.0 * pi * i / grid_size);
    double d = cur - prev;
    d -= 2.0 * pi * std::round(d / (2.0 * pi));
    total += d;
    prev = cur;
  }
  return {static_cast<int>(std::abs(std::lround(total / (2.0 * pi)))), false};
}

Operator step_dependent_walk(double theta, double k, int steps, double delta_k) {
  const Operator w0 = single_step(theta, k);
  Operator out = Operator::identity({2});
  for (int m = 1; m <= steps; ++m) {
    out = shift(m * delta_k) * w0 * out;
  }
  return out;
}

Operator walk_sequence(const WalkParams& params) {
  params.validate();
  return step_dependent_walk(params.theta, params.k, params.total_steps(), params.delta_k());
}

double revival_residual(double theta, int n) {
  const Operator w = walk_sequence({theta, 0.0, n});
  return operator_norm(Matrix(w.matrix() + Matrix::Identity(2, 2)));
}

double revival_bound(double theta, int n) { return 2.0 * std::pow(std::abs(std::cos(theta / 2.0)), n); }

Operator effective_hamiltonian(const Operator& step) {
  if (step.side() != 2) throw std::invalid_argument("effective_hamiltonian: expected a 2x2 unitary");
  Eigen::ComplexEigenSolver<Matrix> eig(step.matrix());
  const Matrix& v = eig.eigenvectors();
  Vector energies(2);
  for (int i = 0; i < 2; ++i) energies(i) = -std::arg(eig.eigenvalues()(i));
  // Eigenvectors of a unitary with distinct eigenvalues are orthogonal.
  return Operator(v * energies.asDiagonal() * v.inverse());
}

Matrix dot_sigma(const Vec3& a) { return a[0] * pauli::x() + a[1] * pauli::y() + a[2] * pauli::z(); }

}  // namespace qwalk::walk
