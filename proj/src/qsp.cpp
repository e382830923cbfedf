#include "qwalk/qsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/LevenbergMarquardt>

namespace qwalk::qsp {

using std::numbers::pi;
using Mat2 = Eigen::Matrix2cd;

namespace {

Mat2 signal2(double x) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  Mat2 w;
  w << x, cplx(0, -s), cplx(0, -s), x;
  return w;
}

Mat2 ez2(double a) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = std::polar(1.0, a);
  m(1, 1) = std::polar(1.0, -a);
  return m;
}

Mat2 unitary2(const std::vector<double>& phases, double x) {
  const Mat2 w = signal2(x);
  const int d = static_cast<int>(phases.size()) - 1;
  Mat2 u = Mat2::Identity();
  for (int j = 1; j <= d; ++j) u = u * ez2(phases[d + 1 - j]) * w;
  return u * ez2(phases[0]);
}

void check_x(double x) {
  if (!(std::abs(x) <= 1.0 + 1e-12)) throw std::domain_error("signal value outside [-1, 1]");
}

// Residual r = (Re(resp - P), Im(resp)) on the grid, analytic Jacobian.
struct ResponseFit : Eigen::DenseFunctor<double> {
  const std::vector<double>& xs;
  std::vector<double> target;

  ResponseFit(const std::vector<double>& grid, const TargetPolynomial& p, int n_phases)
      : DenseFunctor<double>(n_phases, 2 * static_cast<int>(grid.size())), xs(grid) {
    for (double x : xs) target.push_back(p(x));
  }

  int operator()(const InputType& phi, ValueType& r) const {
    const std::vector<double> ph(phi.data(), phi.data() + phi.size());
    const auto n = xs.size();
    for (std::size_t i = 0; i < n; ++i) {
      const cplx v = unitary2(ph, xs[i])(0, 0);
      r(i) = v.real() - target[i];
      r(n + i) = v.imag();
    }
    return 0;
  }

  int df(const InputType& phi, JacobianType& jac) const {
    const int d = static_cast<int>(phi.size()) - 1;
    const auto n = xs.size();
    std::vector<Mat2> right(d + 1), left(d + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const Mat2 w = signal2(xs[i]);
      // U = left_j E_j right_j
      right[0] = Mat2::Identity();
      for (int j = 1; j <= d; ++j) right[j] = w * ez2(phi(j - 1)) * right[j - 1];
      left[d] = Mat2::Identity();
      for (int j = d - 1; j >= 0; --j) left[j] = left[j + 1] * ez2(phi(j + 1)) * w;
      for (int j = 0; j <= d; ++j) {
        Mat2 e = ez2(phi(j));
        e(0, 0) *= cplx(0, 1);
        e(1, 1) *= cplx(0, -1);
        const cplx g = (left[j] * e * right[j])(0, 0);
        jac(i, j) = g.real();
        jac(n + i, j) = g.imag();
      }
    }
    return 0;
  }
};

}  // namespace

void to_json(nlohmann::json& j, const PhaseSequence& seq) { j = seq.phases; }

void from_json(const nlohmann::json& j, PhaseSequence& seq) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("phase sequence must be a non-empty array of radians");
  seq.phases = j.get<std::vector<double>>();
}

Operator signal_operator(double x) {
  check_x(x);
  return Operator(Matrix(signal2(std::clamp(x, -1.0, 1.0))));
}

Matrix qsp_unitary(const PhaseSequence& seq, double x) {
  check_x(x);
  if (seq.phases.empty()) throw std::invalid_argument("qsp: empty phase sequence");
  return unitary2(seq.phases, std::clamp(x, -1.0, 1.0));
}

std::complex<double> qsp_response(const PhaseSequence& seq, double x) { return qsp_unitary(seq, x)(0, 0); }

TargetPolynomial target_poly_roots(const std::vector<double>& roots) {
  double norm = 1.0;
  for (double r : roots) {
    if (std::abs(r) >= 1.0) throw std::invalid_argument("target polynomial roots must lie in (-1, 1)");
    norm *= (1.0 - r * r) * (1.0 - r * r);
  }
  TargetPolynomial p;
  p.eval = [roots, norm](double x) {
    double v = 2.0 * x * x;
    for (double r : roots) v *= (x * x - r * r) * (x * x - r * r);
    return v / norm - 1.0;
  };
  p.degree = 2 + 4 * static_cast<int>(roots.size());
  p.parity = 0;
  p.name = "roots";
  return p;
}

TargetPolynomial target_poly_ab(double a, double b) {
  auto p = target_poly_roots({a, b});
  p.name = "P_ab";
  return p;
}

TargetPolynomial target_poly_a(double a) {
  auto p = target_poly_roots({a});
  p.name = "P_a";
  return p;
}

TargetPolynomial target_monomial(int d) {
  return {[d](double x) { return std::pow(x, d); }, d, d % 2, "x^" + std::to_string(d)};
}

TargetPolynomial target_chebyshev(int d) {
  return {[d](double x) { return std::cos(d * std::acos(std::clamp(x, -1.0, 1.0))); }, d, d % 2,
          "T_" + std::to_string(d)};
}

PhaseSequence walk_phase_sequence(int n, double k) {
  if (n < 1) throw std::invalid_argument("walk_phase_sequence: N must be positive");
  PhaseSequence seq;
  seq.phases.push_back(0.0);
  for (int j = 1; j <= 2 * n; ++j) seq.phases.push_back(k + 2.0 * pi * j / n);
  return seq;
}

Matrix walk_polynomial_operator(int n, double x) {
  check_x(x);
  const Mat2 w = signal2(std::clamp(x, -1.0, 1.0));
  Mat2 out = Mat2::Identity();
  for (int j = 1; j <= n; ++j) out = out * ez2(2.0 * pi * (n + 1 - j) / n) * w;
  return out;
}

WalkPolynomialReport verify_walk_polynomial(int n, const std::vector<double>& xs) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("verify_walk_polynomial: N must be a positive odd integer");
  WalkPolynomialReport rep;
  rep.n = n;
  for (double x : xs) {
    const Matrix w = walk_polynomial_operator(n, x);
    const Matrix w2 = w * w;
    const double xn = std::pow(x, n);
    rep.max_dev_entry = std::max(rep.max_dev_entry, std::abs(w(0, 0) - xn));
    rep.max_dev_trace = std::max(rep.max_dev_trace, std::abs(w.trace() - 2.0 * xn));
    for (int i = 0; i < 2; ++i) {
      rep.max_dev_square = std::max(rep.max_dev_square, std::abs(w2(i, i) - (2.0 * xn * xn - 1.0)));
    }
    rep.max_imag_entry = std::max(rep.max_imag_entry, std::abs(w(0, 0).imag()));
  }
  return rep;
}

ConditionReport check_target(const TargetPolynomial& target, int d) {
  ConditionReport rep;
  constexpr int kGrid = 2001;
  rep.parity_ok = target.degree <= d && target.parity == d % 2;
  const double sign = target.parity == 0 ? 1.0 : -1.0;
  double parity_defect = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double x = -1.0 + 2.0 * i / (kGrid - 1);
    const double v = target(x);
    rep.max_abs_inside = std::max(rep.max_abs_inside, std::abs(v));
    parity_defect = std::max(parity_defect, std::abs(v - sign * target(-x)));
  }
  rep.parity_ok = rep.parity_ok && parity_defect < 1e-9;
  rep.bounded_ok = rep.max_abs_inside <= 1.0 + 1e-9;
  rep.outside_ok = true;
  for (int i = 0; i < kGrid; ++i) {
    const double x = 1.0 + 3.0 * i / (kGrid - 1);
    if (std::abs(target(x)) < 1.0 - 1e-9 || std::abs(target(-x)) < 1.0 - 1e-9) rep.outside_ok = false;
  }
  rep.imaginary_ok = true;
  if (d % 2 == 0) {
    // For an even real polynomial P(i y) is a real polynomial in y^2: evaluate
    // through the coefficients recovered by interpolation at Chebyshev nodes.
    const int m = target.degree / 2 + 1;
    Eigen::MatrixXd vand(m, m);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
      const double x = std::cos((2.0 * i + 1.0) * pi / (4.0 * m));
      for (int c = 0; c < m; ++c) vand(i, c) = std::pow(x * x, c);
      rhs(i) = target(x);
    }
    const Eigen::VectorXd coef = vand.colPivHouseholderQr().solve(rhs);
    for (int i = 0; i < kGrid; ++i) {
      const double y = 3.0 * i / (kGrid - 1);
      double v = 0.0;
      for (int c = m - 1; c >= 0; --c) v = v * (-y * y) + coef(c);
      if (std::abs(v) < 1.0 - 1e-9) rep.imaginary_ok = false;
    }
  }
  return rep;
}

std::vector<double> chebyshev_grid(int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[i] = std::cos((2.0 * i + 1.0) * pi / (2.0 * n));
  return xs;
}

double sup_residual(const PhaseSequence& seq, const TargetPolynomial& target, const std::vector<double>& xs) {
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, std::abs(qsp_response(seq, x) - target(x)));
  return worst;
}

FindResult find_phases(const TargetPolynomial& target, int d, const FindOptions& options) {
  if (d < 1) throw std::invalid_argument("find_phases: degree must be >= 1");
  const ConditionReport cond = check_target(target, d);
  FindResult res;
  if (!cond.ok()) {
    res.message = "target violates the achievability conditions";
    return res;
  }
  const auto xs = chebyshev_grid(options.grid);
  ResponseFit fit(xs, target, d + 1);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> dist(-pi, pi);

  double best = std::numeric_limits<double>::infinity();
  for (int attempt = 1; attempt <= options.restarts; ++attempt) {
    Eigen::VectorXd phi(d + 1);
    for (int j = 0; j <= d; ++j) phi(j) = dist(rng);
    Eigen::LevenbergMarquardt<ResponseFit> lm(fit);
    lm.setXtol(1e-15);
    lm.setFtol(1e-15);
    lm.setGtol(1e-15);
    lm.setMaxfev(2000);
    lm.minimize(phi);

    PhaseSequence seq{std::vector<double>(phi.data(), phi.data() + phi.size())};
    for (double& v : seq.phases) v = std::remainder(v, 2.0 * pi);
    const cplx at_one = qsp_response(seq, 1.0);
    const double want = target(1.0);
    if (std::abs(std::abs(at_one) - std::abs(want)) < 1e-6 && std::abs(want) > 0.0) {
      seq.phases[0] = std::remainder(seq.phases[0] - std::arg(at_one / want), 2.0 * pi);
    }
    const double r = sup_residual(seq, target, xs);
    res.attempts = attempt;
    if (r < best) {
      best = r;
      res.seq = seq;
      res.residual = r;
    }
    if (r < options.tol) {
      res.converged = true;
      res.message = "converged";
      return res;
    }
  }
  res.message = "no restart reached the residual tolerance";
  return res;
}

double qsp_reflection_fidelity(const PhaseSequence& seq, const std::vector<SignalBlock>& blocks) {
  cplx overlap = 0.0;
  double purity = 0.0, n = 0.0;
  for (const auto& b : blocks) {
    const cplx v = qsp_response(seq, b.x);
    const double m = static_cast<double>(b.multiplicity);
    overlap += m * (b.dark ? v : -v);
    purity += m * std::norm(v);
    n += m;
  }
  if (n == 0.0) throw std::invalid_argument("qsp_reflection_fidelity: no blocks");
  return (std::norm(overlap) + purity) / (n * (n + 1.0));
}

double qsp_reflection_fidelity(const PhaseSequence& seq, const std::vector<std::pair<double, long>>& singular_values,
                               double t) {
  std::vector<SignalBlock> blocks;
  for (const auto& [lambda, mult] : singular_values) {
    blocks.push_back({std::cos(lambda * t), mult, lambda == 0.0});
  }
  return qsp_reflection_fidelity(seq, blocks);
}

std::vector<std::pair<double, long>> homogeneous_singular_values(int n_qubits, double g) {
  std::vector<std::pair<double, long>> out;
  long binom = 1;
  for (int m = 0; m <= n_qubits; ++m) {
    out.emplace_back(g * std::sqrt(static_cast<double>(m)), binom);
    binom = binom * (n_qubits - m) / (m + 1);
  }
  return out;
}

PhaseSequence printed_phases_062_03() {
  const double e1 = std::arg(cplx(0.8718, 0.4899));
  const double e2 = std::arg(cplx(0.3831, 0.9237));
  return {{e1, e2, -e2, e1, 0.0, e1, e2, -e2, e1, 0.0, 0.0}};
}

}  // namespace qwalk::qsp
