#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qwalk/cqed.hpp"
#include "qwalk/matrix_embedding.hpp"

using namespace qwalk;
using namespace qwalk::cqed;
using std::numbers::pi;

namespace {

LatticeSpec star(double g_mhz, int local_dim = 3, int n_neighbors = 4) {
  auto anharm = preset_anharmonicities();
  anharm.resize(static_cast<std::size_t>(n_neighbors + 1), -0.27);
  return LatticeSpec::resonant_star(kPresetOmega0Ghz, anharm,
                                    std::vector<double>(static_cast<std::size_t>(n_neighbors), g_mhz / 1000.0),
                                    local_dim);
}

double g_angular(double g_mhz) { return 2.0 * pi * g_mhz / 1000.0; }

}  // namespace

TEST_SUITE("cqed") {

TEST_CASE("resonant star satisfies the CZ resonance") {
  const LatticeSpec s = star(9.0);
  CHECK(s.resonance_mismatch_ghz() < 1e-12);
  CHECK(s.coupling_ghz[0] == doctest::Approx(0.009 / std::sqrt(2.0)));
  CHECK(s.freq_ghz[1] == doctest::Approx(5.15 + 0.249));
  CHECK(s.min_anharmonicity_ratio() == doctest::Approx(0.249 / 0.009));
  CHECK(s.warnings().empty());
}

TEST_CASE("spec validation and warnings") {
  LatticeSpec bad = star(2.0);
  bad.coupling_ghz.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = star(2.0);
  bad.anharm_ghz[2] = 0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(star(2.0, 1), std::invalid_argument);

  const auto literal = LatticeSpec::resonant_star(kPresetOmega0Ghz, preset_anharmonicities_literal(),
                                                  std::vector<double>(4, 0.002));
  const auto w = literal.warnings();
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("neighbour 2") != std::string::npos);
}

TEST_CASE("lab Hamiltonian is Hermitian and conserves excitations") {
  const LatticeSpec s = star(9.0, 3, 3);
  const Operator h = lab_hamiltonian(s);
  CHECK(h.is_hermitian(1e-12));
  const Operator n = excitation_number(s);
  const Matrix comm = h.matrix() * n.matrix() - n.matrix() * h.matrix();
  CHECK(oracle::max_abs(comm) < 1e-12);
}

TEST_CASE("sector Hamiltonians are the restrictions of the dense one") {
  for (int local_dim : {3, 4}) {
    const LatticeSpec s = star(5.0, local_dim, 3);
    const Matrix dense = lab_hamiltonian(s).matrix();
    Eigen::Index covered = 0;
    for (int e = 0; e <= 4 * (local_dim - 1); ++e) {
      const ExcitationSector sec = excitation_sector(s, e);
      covered += sec.size();
      const Matrix hs = sector_hamiltonian(s, sec);
      for (Eigen::Index r = 0; r < sec.size(); ++r)
        for (Eigen::Index c = 0; c < sec.size(); ++c)
          CHECK(std::abs(hs(r, c) - dense(sec.full_index[r], sec.full_index[c])) < 1e-12);
    }
    CHECK(covered == dense.rows());
  }
}

TEST_CASE("free energies by hand") {
  const LatticeSpec s = star(2.0, 3, 2);
  const RealVector e = free_energies(s);
  const std::vector<int> dims{3, 3, 3};
  const double w0 = 2 * pi * s.freq_ghz[0], a2 = 2 * pi * s.anharm_ghz[2];
  const double w2 = 2 * pi * s.freq_ghz[2];
  CHECK(e(flat_index(std::vector<int>{1, 0, 2}, dims)) == doctest::Approx(w0 + 2 * w2 + a2));
}

TEST_CASE("embedded matrix and its singular values") {
  const std::vector<double> g{0.85, 0.99, 0.91};
  const Operator a = embedded_matrix(g);
  CHECK(a.side() == 27);
  // |1><2| on neighbour 2 connects |0 0 2> to |0 0 1>
  CHECK(a(computational_index({0, 0, 1}), flat_index(std::vector<int>{0, 0, 2}, std::vector<int>{3, 3, 3})) ==
        cplx(0.91));

  // computational states are left singular vectors with value sqrt(sum_i J_i g_i^2)
  const Matrix aat = a.matrix() * a.matrix().adjoint();
  for (const auto& b : computational_bitstrings(3)) {
    const Eigen::Index j = computational_index(b);
    Vector e = Vector::Zero(27);
    e(j) = 1.0;
    const double lam = embedded_singular_value(g, b);
    CHECK((aat * e - lam * lam * e).norm() < 1e-12);
  }
  const SVDTriple s = svd(a);
  for (const auto& b : computational_bitstrings(3)) {
    const double lam = embedded_singular_value(g, b);
    const bool found = (s.singular_values.array() - lam).abs().minCoeff() < 1e-10;
    CHECK(found);
  }
}

TEST_CASE("RWA Hamiltonian equals the embedding of the coupling matrix") {
  for (const auto& g : {std::vector<double>{1.0, 1.0}, preset_inhomogeneous_couplings()}) {
    const Operator h = rwa_hamiltonian(g);
    const auto sys = embedding::embed(embedded_matrix(g));
    CHECK(oracle::max_abs(h.matrix() - sys.h.matrix()) == 0.0);
    CHECK(h.dims() == sys.h.dims());
  }
}

TEST_CASE("computational bitstrings and target") {
  const auto bits = computational_bitstrings(3);
  CHECK(bits.size() == 8);
  CHECK(bits[6] == std::vector<int>{1, 1, 0});
  CHECK(computational_index({1, 1, 0}) == 12);
  const Vector t = rotation_target_diag(2, 0.3);
  CHECK(std::abs(t(0) - std::polar(1.0, -0.6)) < 1e-15);
  CHECK(t(3) == cplx(-1.0));
}

TEST_CASE("closed form matches the N = 3 sequence diagonal") {
  const std::vector<double> g(4, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double k = 2 * pi / 3 * i / 8.0;
      const double t = 0.1 + 0.25 * j;
      const auto rep = simulate_rwa_sequence(g, 3, k, t);
      const auto cf = closed_form_rotation_fidelity(k, t, g);
      for (Eigen::Index b = 0; b < rep.m.rows(); ++b) worst = std::max(worst, std::abs(rep.m(b, b) - cf.f[b]));
      CHECK(cf.fidelity == doctest::Approx(rep.fidelity).epsilon(1e-10));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("RWA sequence is diagonal on the computational space") {
  const auto rep = simulate_rwa_sequence(preset_inhomogeneous_couplings(), 5, 0.1, standard_gate_time(1.0));
  const Matrix off = rep.m - Matrix(rep.m.diagonal().asDiagonal());
  CHECK(oracle::max_abs(off) < 1e-12);
  CHECK(rep.leakage == doctest::Approx(1.0 - rep.m.diagonal().squaredNorm() / 16.0));
  CHECK(rep.leakage > 0.0);
  CHECK(rep.phi_star == doctest::Approx(pi - 0.5));
}

TEST_CASE("RWA fidelity improves with N") {
  double prev = 0.0;
  for (int n : {1, 3, 5, 7, 9}) {
    const double f = simulate_rwa_sequence(std::vector<double>(4, 1.0), n, 0.0, standard_gate_time(1.0)).fidelity;
    CHECK(f > prev);
    prev = f;
  }
  CHECK(prev > 0.9999);
}

TEST_CASE("seeded Gaussian draws are reproducible") {
  const auto a = gaussian_draws(42, 6, 1.0, 0.1);
  CHECK(a == gaussian_draws(42, 6, 1.0, 0.1));
  CHECK(a != gaussian_draws(43, 6, 1.0, 0.1));
  CHECK(gaussian_draws(1, 3, 2.0, 0.0) == std::vector<double>(3, 2.0));
}

TEST_CASE("full model approaches the RWA result as g -> 0") {
  const double rwa_limit[] = {0.9804, 0.9988, 0.9999};
  int idx = 0;
  for (int n : {3, 5, 7}) {
    double prev = 0.0;
    double phi_prev = 0.0;
    for (double g_mhz : {9.0, 6.0, 3.0, 2.0, 1.0, 0.5}) {
      const auto r = simulate_full_sequence(star(g_mhz), n, standard_gate_time(g_angular(g_mhz)));
      CHECK(r.fidelity > prev);
      CHECK(r.phi_star > phi_prev);
      prev = r.fidelity;
      phi_prev = r.phi_star;
    }
    CHECK(std::abs(prev - rwa_limit[idx++]) < 1e-3);
    CHECK(std::abs(phi_prev - pi) < 0.05);
  }
}

TEST_CASE("full model restriction is unitary-bounded") {
  const Matrix m = full_sequence_restriction(star(3.0), 3, standard_gate_time(g_angular(3.0)));
  CHECK(m.rows() == 16);
  Eigen::JacobiSVD<Matrix> svd_m(m);
  CHECK(svd_m.singularValues()(0) <= 1.0 + 1e-10);
}

TEST_CASE("phi optimisation finds a known angle") {
  const Vector target = rotation_target_diag(2, 1.2);
  const Matrix m = target.asDiagonal();
  const auto opt = optimize_phi(m, 2);
  CHECK(opt.fidelity == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(opt.phi == doctest::Approx(1.2 + pi).epsilon(1e-6));
}

TEST_CASE("probe traces start at one and converge in local_dim") {
  const LatticeSpec s = star(9.0);
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(pi / g_angular(9.0) * i / 100.0);
  const auto traces = probe_initial_states(s, {{1, 1, 0, 0, 0}, {1, 0, 0, 0, 0}}, times);
  REQUIRE(traces.size() == 2);
  CHECK(traces[0].label == "|11000>");
  CHECK(traces[0].population.front() == doctest::Approx(1.0));
  const auto wide = probe_initial_states(star(9.0, 5), {{1, 1, 0, 0, 0}, {1, 0, 0, 0, 0}}, times);
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t i = 0; i < times.size(); ++i)
      CHECK(std::abs(traces[t].population[i] - wide[t].population[i]) < 1e-2);
}

TEST_CASE("probe agrees with dense evolution") {
  const LatticeSpec s = star(9.0, 3, 2);
  const Matrix h = lab_hamiltonian(s).matrix();
  const std::vector<int> init{1, 1, 0};
  const double t = 20.0;
  const auto tr = probe_initial_states(s, {init}, {t});
  const Eigen::Index idx = flat_index(init, std::vector<int>{3, 3, 3});
  const Matrix u = matexp_hermitian(Operator(h), t).matrix();
  CHECK(tr[0].population[0] == doctest::Approx(std::norm(u(idx, idx))).epsilon(1e-10));
}

TEST_CASE("standard gate time") { CHECK(standard_gate_time(2.0) == doctest::Approx(0.333 * pi / 2.0)); }

}
