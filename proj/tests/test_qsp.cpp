#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "qwalk/qsp.hpp"

using namespace qwalk;
using namespace qwalk::qsp;
using std::numbers::pi;

namespace {

Matrix hand_unitary(const std::vector<double>& phi, double x) {
  const Matrix w = oracle::expm(cplx(0, -std::acos(x)) * oracle::sx());
  Matrix u = oracle::expm(cplx(0, phi[0]) * oracle::sz());
  for (std::size_t j = 1; j < phi.size(); ++j) u = (oracle::expm(cplx(0, phi[j]) * oracle::sz()) * w * u).eval();
  return u;
}

}  // namespace

TEST_SUITE("qsp") {

TEST_CASE("signal operator is exp(-i arccos(x) sigma_x)") {
  for (double x : {-1.0, -0.3, 0.0, 0.62, 1.0}) {
    const Operator w = signal_operator(x);
    CHECK(w.is_unitary(1e-12));
    CHECK(oracle::max_abs(w.matrix() - oracle::expm(cplx(0, -std::acos(x)) * oracle::sx())) < 1e-12);
  }
  CHECK_THROWS_AS(signal_operator(1.5), std::domain_error);
}

TEST_CASE("qsp_unitary matches a hand-built product") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int d : {0, 1, 4, 7}) {
    std::vector<double> phi(static_cast<std::size_t>(d + 1));
    for (auto& p : phi) p = u(rng);
    for (double x : {-0.9, 0.1, 0.5}) {
      const Matrix expect = hand_unitary(phi, x);
      CHECK(oracle::max_abs(qsp_unitary({phi}, x) - expect) < 1e-12);
      CHECK(std::abs(qsp_response({phi}, x) - expect(0, 0)) < 1e-12);
    }
  }
}

TEST_CASE("responses are bounded by one and have definite parity") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 9;
    std::vector<double> phi(static_cast<std::size_t>(d + 1));
    for (auto& p : phi) p = u(rng);
    for (int i = 0; i <= 40; ++i) {
      const double x = -1.0 + i / 20.0;
      const cplx r = qsp_response({phi}, x);
      CHECK(std::abs(r) <= 1.0 + 1e-12);
      const cplx mirrored = qsp_response({phi}, -x);
      CHECK(std::abs(mirrored - (d % 2 == 0 ? r : -r)) < 1e-12);
    }
  }
}

TEST_CASE("trivial phases give Chebyshev polynomials") {
  for (int d : {1, 2, 5, 8}) {
    const PhaseSequence seq{std::vector<double>(static_cast<std::size_t>(d + 1), 0.0)};
    const auto cheb = target_chebyshev(d);
    for (double x : chebyshev_grid(17)) CHECK(qsp_response(seq, x).real() == doctest::Approx(cheb(x)));
  }
}

TEST_CASE("target polynomials") {
  const auto p = target_poly_ab(0.62, 0.3);
  CHECK(p.degree == 10);
  CHECK(p.parity == 0);
  CHECK(p(1.0) == doctest::Approx(1.0));
  CHECK(p(0.0) == doctest::Approx(-1.0));
  CHECK(p(0.62) == doctest::Approx(-1.0));
  CHECK(p(-0.3) == doctest::Approx(-1.0));
  CHECK(target_poly_a(std::sqrt(0.5)).degree == 6);
  CHECK_THROWS_AS(target_poly_roots({1.2}), std::invalid_argument);
  CHECK(target_monomial(3)(0.5) == doctest::Approx(0.125));
  CHECK(target_chebyshev(4)(0.3) == doctest::Approx(std::cos(4 * std::acos(0.3))));
}

TEST_CASE("check_target") {
  CHECK(check_target(target_poly_ab(0.62, 0.3), 10).ok());
  CHECK(check_target(target_poly_a(0.5), 6).ok());
  const auto bad = check_target(target_monomial(3), 4);
  CHECK_FALSE(bad.parity_ok);
  TargetPolynomial big;
  big.eval = [](double x) { return 2 * x * x; };
  big.degree = 2;
  CHECK_FALSE(check_target(big, 2).bounded_ok);
}

TEST_CASE("walk polynomial identities") {
  std::vector<double> xs;
  for (int i = 0; i <= 100; ++i) xs.push_back(-1.0 + i / 50.0);
  for (int n : {1, 3, 5, 7}) {
    const auto rep = verify_walk_polynomial(n, xs);
    CHECK(rep.max_dev_entry < 1e-11);
    CHECK(rep.max_dev_trace < 1e-11);
    CHECK(rep.max_dev_square < 1e-11);
  }
  // hand product for N = 3
  const double x = 0.37;
  const Matrix w = oracle::expm(cplx(0, -std::acos(x)) * oracle::sx());
  Matrix expect = Matrix::Identity(2, 2);
  for (int j = 1; j <= 3; ++j) {
    Matrix r = Matrix::Zero(2, 2);
    r(0, 0) = std::polar(1.0, 2 * pi * (4 - j) / 3.0);
    r(1, 1) = std::conj(r(0, 0));
    expect = (expect * r * w).eval();
  }
  CHECK(oracle::max_abs(walk_polynomial_operator(3, x) - expect) < 1e-12);
}

TEST_CASE("walk phase sequence") {
  const auto seq = walk_phase_sequence(3, 0.2);
  REQUIRE(seq.phases.size() == 7);
  CHECK(seq.phases[0] == 0.0);
  CHECK(seq.phases[4] == doctest::Approx(0.2 + 8 * pi / 3));
}

TEST_CASE("find_phases fits the two-root target") {
  const auto target = target_poly_ab(0.62, 0.3);
  const auto res = find_phases(target, 10);
  REQUIRE(res.converged);
  CHECK(res.residual < 1e-6);
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(-1.0 + i / 200.0);
  CHECK(sup_residual(res.seq, target, xs) < 1e-5);
  CHECK(std::abs(qsp_response(res.seq, 1.0) - 1.0) < 1e-9);
  for (double p : res.seq.phases) CHECK(std::abs(p) <= pi + 1e-12);
  const auto again = find_phases(target, 10);
  CHECK(again.seq.phases == res.seq.phases);
}

TEST_CASE("find_phases on a Chebyshev target") {
  const auto res = find_phases(target_chebyshev(6), 6);
  CHECK(res.converged);
  CHECK(res.residual < 1e-6);
}

TEST_CASE("reflection fidelity from blocks") {
  const PhaseSequence id{{0.0}};
  // response is identically 1: perfect on dark blocks, -1 target elsewhere
  CHECK(qsp_reflection_fidelity(id, {{1.0, 1, true}}) == doctest::Approx(1.0));
  const double f = qsp_reflection_fidelity(id, {{1.0, 1, true}, {0.5, 1, false}});
  CHECK(f == doctest::Approx((0.0 + 2.0) / 6.0));
  const auto sv = homogeneous_singular_values(6);
  REQUIRE(sv.size() == 7);
  long total = 0;
  for (const auto& [v, m] : sv) total += m;
  CHECK(total == 64);
  CHECK(sv[2].first == doctest::Approx(std::sqrt(2.0)));
  CHECK(sv[3].second == 20);
}

TEST_CASE("phase sequence json round trip") {
  const PhaseSequence seq{{0.1, -0.2, 3.0}};
  const nlohmann::json j = seq;
  CHECK(j.is_array());
  CHECK(j.get<PhaseSequence>().phases == seq.phases);
  CHECK_THROWS(nlohmann::json::object().get<PhaseSequence>());
}

TEST_CASE("printed phases have the stated pattern") {
  const auto p = printed_phases_062_03().phases;
  REQUIRE(p.size() == 11);
  CHECK(p[0] == p[3]);
  CHECK(p[1] == -p[2]);
  CHECK(p[4] == 0.0);
  CHECK(p[9] == 0.0);
  CHECK(p[10] == 0.0);
}

}
