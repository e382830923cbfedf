#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qwalk/linalg.hpp"

namespace qwalk::qsp {

/// Phases phi_0..phi_d in radians.
struct PhaseSequence {
  std::vector<double> phases;

  int degree() const { return static_cast<int>(phases.size()) - 1; }
};

void to_json(nlohmann::json& j, const PhaseSequence& seq);
void from_json(const nlohmann::json& j, PhaseSequence& seq);

struct TargetPolynomial {
  std::function<double(double)> eval;
  int degree = 0;
  int parity = 0;  // 0 even, 1 odd
  std::string name;

  double operator()(double x) const { return eval(x); }
};

/// [[x, -i sqrt(1-x^2)], [-i sqrt(1-x^2), x]]
Operator signal_operator(double x);

/// <0| [prod_{j=1..d} e^{i phi_{d+1-j} sigma_z} W(x)] e^{i phi_0 sigma_z} |0>
std::complex<double> qsp_response(const PhaseSequence& seq, double x);

/// Full 2x2 product behind qsp_response.
Matrix qsp_unitary(const PhaseSequence& seq, double x);

/// 2 x^2 (x^2-a^2)^2 (x^2-b^2)^2 / ((1-a^2)^2 (1-b^2)^2) - 1
TargetPolynomial target_poly_ab(double a, double b);
/// 2 x^2 (x^2-a^2)^2 / (1-a^2)^2 - 1
TargetPolynomial target_poly_a(double a);
/// 2 x^2 prod_m (x^2 - r_m^2)^2 / prod_m (1 - r_m^2)^2 - 1 for a list of roots.
TargetPolynomial target_poly_roots(const std::vector<double>& roots);
/// Monomial x^d, used for sanity checks.
TargetPolynomial target_monomial(int d);
/// Chebyshev T_d.
TargetPolynomial target_chebyshev(int d);

/// Walk phases: phi_0 = 0, phi_j = k + 2 pi j / N for j = 1..2N.
PhaseSequence walk_phase_sequence(int n, double k = 0.0);

struct WalkPolynomialReport {
  int n = 0;
  double max_dev_entry = 0.0;   // <0|W_N|0> - x^N
  double max_dev_trace = 0.0;   // tr W_N - 2 x^N
  double max_dev_square = 0.0;  // <i|W_N^2|i> - (2 x^{2N} - 1)
  double max_imag_entry = 0.0;
};

/// W_N(x) = prod_{j=1..N} R_{N+1-j} W(x), R_j = diag(w_j, conj(w_j)), w_j = e^{2 pi i j / N}.
Matrix walk_polynomial_operator(int n, double x);
WalkPolynomialReport verify_walk_polynomial(int n, const std::vector<double>& xs);

struct ConditionReport {
  bool parity_ok = false;
  bool bounded_ok = false;      // |P| <= 1 on [-1, 1]
  bool outside_ok = false;      // |P| >= 1 for |x| >= 1
  bool imaginary_ok = false;    // |P(ix)| >= 1, even degree only
  double max_abs_inside = 0.0;

  bool ok() const { return parity_ok && bounded_ok && outside_ok && imaginary_ok; }
};

ConditionReport check_target(const TargetPolynomial& target, int d);

struct FindOptions {
  std::uint64_t seed = 7;
  int restarts = 60;
  double tol = 1e-6;
  int grid = 201;
};

struct FindResult {
  PhaseSequence seq;
  bool converged = false;
  double residual = 0.0;  // sup-norm on the Chebyshev grid
  int attempts = 0;
  std::string message;
};

/// Chebyshev nodes cos((2i+1) pi / (2n)), i = 0..n-1.
std::vector<double> chebyshev_grid(int n);

/// Least-squares fit of the response to the target on the Chebyshev grid
/// (real and imaginary parts), multi-start from seeded random phases. The
/// result is gauge-fixed so that response(1) = target(1).
FindResult find_phases(const TargetPolynomial& target, int d, const FindOptions& options = {});

double sup_residual(const PhaseSequence& seq, const TargetPolynomial& target, const std::vector<double>& xs);

/// A degenerate block of signal value x. Dark blocks should map to +1, the
/// rest to -1.
struct SignalBlock {
  double x = 1.0;
  long multiplicity = 1;
  bool dark = false;
};

/// Average gate fidelity of diag(response(x_b)) against +1 on dark blocks, -1 elsewhere.
double qsp_reflection_fidelity(const PhaseSequence& seq, const std::vector<SignalBlock>& blocks);

/// Same, from singular values Lambda (with multiplicities) at time t; Lambda = 0 is dark.
double qsp_reflection_fidelity(const PhaseSequence& seq,
                               const std::vector<std::pair<double, long>>& singular_values, double t);

/// Lambda / g in {sqrt(m)} with multiplicity C(n, m), m = 0..n.
std::vector<std::pair<double, long>> homogeneous_singular_values(int n_qubits, double g = 1.0);

/// Phase vector as printed for P_{0.62,0.3}: (eta1, eta2, -eta2, eta1, 0, eta1, eta2, -eta2, eta1, 0, 0).
PhaseSequence printed_phases_062_03();

}  // namespace qwalk::qsp
