// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/coined_walk.hpp"
#include "qwalk/cqed.hpp"
#include "qwalk/fsbsw.hpp"
#include "qwalk/ion_rydberg.hpp"
#include "qwalk/matrix_embedding.hpp"
#include "qwalk/qsp.hpp"
#include "qwalk/runner.hpp"

using namespace qwalk;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

double g_angular(double g_mhz) { return 2.0 * pi * g_mhz / 1000.0; }

void table_ii() {
  const double homog_ref[] = {0.9804, 0.9988, 0.9999};
  const double inhomog_ref[] = {0.9721, 0.9974, 0.9997};
  const auto inhomog = cqed::preset_inhomogeneous_couplings();
  const double g_max = *std::max_element(inhomog.begin(), inhomog.end());
  bool ok = true;
  std::ostringstream os;
  os << "homogeneous";
  int i = 0;
  for (int n : {3, 5, 7}) {
    const double f = cqed::simulate_rwa_sequence(std::vector<double>(4, 1.0), n, 0.0, cqed::standard_gate_time(1.0)).fidelity;
    const bool hit = std::abs(f - homog_ref[i]) <= 5e-4;
    ok = ok && hit;
    os << " N=" << n << " " << fmt(f) << (hit ? "" : "(x)");
    ++i;
  }
  os << "; inhomogeneous";
  i = 0;
  for (int n : {3, 5, 7}) {
    const double f = cqed::simulate_rwa_sequence(inhomog, n, 0.0, cqed::standard_gate_time(g_max)).fidelity;
    const bool hit = std::abs(f - inhomog_ref[i]) <= 5e-4;
    ok = ok && hit;
    os << " N=" << n << " " << fmt(f) << " vs " << fmt(inhomog_ref[i]) << (hit ? "" : "(x)");
    ++i;
  }
  os << " (tol 5e-4)";
  report(1, "RWA rotation fidelities", ok, os.str());
}

void table_iv() {
  struct Point {
    double g_mhz;
    int n;
    double f_ref, f_tol;
    double phi_ref, phi_tol;
  };
  const Point points[] = {{2.0, 5, 0.9945, 3e-3, 3.061, 0.02}, {3.0, 5, 0.9888, 3e-3, -1, 0}, {9.0, 3, 0.9531, 5e-3, -1, 0}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& p : points) {
    const auto spec = runner::lattice_preset("transmon-star", p.g_mhz);
    const auto r = cqed::simulate_full_sequence(spec, p.n, cqed::standard_gate_time(g_angular(p.g_mhz)));
    bool hit = std::abs(r.fidelity - p.f_ref) <= p.f_tol;
    os << "g=" << p.g_mhz << "MHz N=" << p.n << " F=" << fmt(r.fidelity) << " vs " << fmt(p.f_ref);
    if (p.phi_ref > 0) {
      hit = hit && std::abs(r.phi_star - p.phi_ref) <= p.phi_tol;
      os << " phi*=" << fmt(r.phi_star, 3) << " vs " << fmt(p.phi_ref, 3);
    }
    os << (hit ? "" : "(x)") << "; ";
    ok = ok && hit;
  }
  const auto literal = runner::lattice_preset("transmon-star-literal", 9.0);
  const auto rl = cqed::simulate_full_sequence(literal, 3, cqed::standard_gate_time(g_angular(9.0)));
  const auto literal2 = runner::lattice_preset("transmon-star-literal", 2.0);
  const auto rl2 = cqed::simulate_full_sequence(literal2, 5, cqed::standard_gate_time(g_angular(2.0)));
  os << "literal alpha3=-0.283MHz run: g=9 N=3 F=" << fmt(rl.fidelity) << ", g=2 N=5 F=" << fmt(rl2.fidelity);
  report(2, "full lab-frame fidelities", ok, os.str());
}

void revival() {
  double worst = 0.0;
  for (double theta : {pi / 4, pi / 2, 2 * pi / 3, pi}) {
    for (int n : {3, 5, 7, 9}) {
      worst = std::max(worst, std::abs(walk::revival_residual(theta, n) - walk::revival_bound(theta, n)));
    }
  }
  report(3, "revival theorem", worst < 1e-9, "max | ||W+I|| - 2|cos(theta/2)|^N | = " + sci(worst) + " (tol 1e-9)");
}

void walk_identities() {
  std::vector<double> xs;
  for (int i = 0; i <= 100; ++i) xs.push_back(-1.0 + i / 50.0);
  double worst = 0.0;
  for (int n : {3, 5, 7}) {
    const auto r = qsp::verify_walk_polynomial(n, xs);
    worst = std::max({worst, r.max_dev_entry, r.max_dev_trace, r.max_dev_square});
  }
  report(4, "walk polynomial identities", worst < 1e-11, "max deviation " + sci(worst) + " over N=3,5,7 and 101 x (tol 1e-11)");
}

void closed_form() {
  const std::vector<double> g(4, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double k = 2 * pi / 3 * i / 8.0;
      const double t = 0.05 + 0.2 * j;
      const auto seq = cqed::simulate_rwa_sequence(g, 3, k, t);
      const auto cf = cqed::closed_form_rotation_fidelity(k, t, g);
      for (Eigen::Index b = 0; b < seq.m.rows(); ++b) worst = std::max(worst, std::abs(seq.m(b, b) - cf.f[b]));
    }
  }
  const double f0 = cqed::closed_form_rotation_fidelity(0.0, cqed::standard_gate_time(1.0), g).fidelity;

  // F(k) curve through the runner, as written to k_sweep.csv
  runner::ExperimentConfig cfg;
  cfg.command = "cqed-rwa";
  cfg.params = {{"n", {3}}, {"k_sweep", {{"from", 0.0}, {"to", 2 * pi / 3}, {"points", 121}}}};
  const auto rec = runner::run(cfg);
  std::vector<double> f;
  for (const auto& t : rec.tables) {
    if (t.name != "k_sweep") continue;
    for (const auto& row : t.rows) f.push_back(std::stod(row[1]));
  }
  bool shape = f.size() == 121;
  // rises to k = pi/6, falls to pi/3, rises to pi/2, falls to 2 pi/3
  const int edges[] = {0, 30, 60, 90, 120};
  for (int s = 0; shape && s < 4; ++s) {
    for (int i = edges[s]; i < edges[s + 1]; ++i) {
      const bool rising = s % 2 == 0;
      if (rising ? !(f[i + 1] > f[i]) : !(f[i + 1] < f[i])) shape = false;
    }
  }
  const bool peaks = shape && std::abs(f[30] - 1.0) < 1e-12 && std::abs(f[90] - 1.0) < 1e-12;
  const bool ok = worst < 1e-10 && std::abs(f0 - 0.9804) <= 5e-4 && shape && peaks;
  report(5, "closed-form rotation fidelity", ok,
         "64-point max |f - sequence| = " + sci(worst) + " (tol 1e-10); F(k=0) = " + fmt(f0) +
             "; F(k) sweep 121 pts rises/falls/rises/falls on pi/6 segments, F(pi/6)=" + fmt(shape ? f[30] : 0.0, 12) +
             ", F(pi/3)=" + fmt(shape ? f[60] : 0.0) + (shape ? "" : " (shape mismatch)"));
}

void qsp_reflection() {
  const auto target = qsp::target_poly_ab(0.62, 0.3);
  const auto found = qsp::find_phases(target, 10);
  const auto sv = qsp::homogeneous_singular_values(6);
  const double f_found = qsp::qsp_reflection_fidelity(found.seq, sv, 0.88);
  const double f_printed = qsp::qsp_reflection_fidelity(qsp::printed_phases_062_03(), sv, 0.88);

  const auto ion_target = qsp::target_poly_a(1.0 / std::sqrt(2.0));
  const auto ion_found = qsp::find_phases(ion_target, 6);
  std::vector<qsp::SignalBlock> blocks;
  long binom = 1;
  for (int m = 0; m <= 6; ++m) {
    const double lambda = 0.5 * (6 - 2 * m);
    blocks.push_back({std::cos((pi / 2) * lambda / 2.0), binom, lambda == 0.0});
    binom = binom * (6 - m) / (m + 1);
  }
  const double f_ion = qsp::qsp_reflection_fidelity(ion_found.seq, blocks);
  const bool ok = found.converged && f_found >= 0.999 && ion_found.converged && std::abs(f_ion - 1.0) < 1e-9;
  report(6, "QSP 6-qubit reflection", ok,
         "recomputed P_{0.62,0.3} phases F(t=0.88/g) = " + fmt(f_found, 5) + " (>= 0.999; printed vector gives " +
             fmt(f_printed, 4) + "); ion N_q=6 theta=pi/2 P_{1/sqrt2} |F-1| = " + sci(std::abs(f_ion - 1.0)) +
             " (tol 1e-9)");
}

void fsbsw_check() {
  const auto seq = fsbsw::build_fsbsw_sequence(4);
  const auto sum = fsbsw::summarize(fsbsw::simulate_fsbsw(seq), 4, 1e-10);
  bool ok = seq.duration() == 5.0 && sum.diagonal_pm_one && sum.minus_one.size() == 1 &&
            sum.minus_one[0] == std::vector<int>{0, 1, 1, 0};
  std::ostringstream os;
  os << "n=4 duration " << seq.duration() << " pi/g, -1 entries " << sum.minus_one.size()
     << (ok ? " at |0110>" : " (unexpected)") << ", max offdiag " << sci(sum.max_offdiag) << "; durations";
  for (int n = 3; n <= 6; ++n) {
    const auto s = fsbsw::build_fsbsw_sequence(n);
    const auto sm = fsbsw::summarize(fsbsw::simulate_fsbsw(s), n, 1e-10);
    const bool hit = s.duration() == 2.0 * n - 3 && sm.diagonal_pm_one && sm.minus_one.size() == 1;
    ok = ok && hit;
    os << " n=" << n << ":" << s.duration() << (hit ? "" : "(x)");
  }
  // cost rows: this work 3.33 CZ / 10 Rz, FSBSW 5 CZ / 1 Rz, 1,2Q 13 two-qubit gates / not counted
  const auto rows = fsbsw::cost_comparison(4, 5);
  const bool table = rows.size() == 3 && rows[0].method == "this work" && std::abs(rows[0].two_qubit_time_cz - 3.33) < 1e-12 &&
                     rows[0].single_qubit_count == 10 && rows[1].method == "FSBSW" && rows[1].two_qubit_time_cz == 5.0 &&
                     rows[1].single_qubit_count == 1 && rows[2].method == "1,2Q" && rows[2].two_qubit_time_cz == 13.0 &&
                     !rows[2].single_qubit_count.has_value();
  ok = ok && table;
  os << "; cost rows " << (table ? "match" : "differ");
  report(7, "FSBSW baseline", ok, os.str());
}

void population_probe() {
  const double g = g_angular(9.0);
  std::vector<double> times;
  for (int i = 0; i <= 400; ++i) times.push_back(pi / g * i / 400.0);
  const std::vector<std::vector<int>> states{{1, 1, 0, 0, 0}, {1, 0, 0, 0, 0}, {1, 1, 1, 1, 1}};
  const auto tr3 = cqed::probe_initial_states(runner::lattice_preset("transmon-star", 9.0, 3), states, times);
  const auto tr5 = cqed::probe_initial_states(runner::lattice_preset("transmon-star", 9.0, 5), states, times);
  const double swap = tr3[0].population[200];  // t = pi / (2 g)
  const double idle_min = *std::min_element(tr3[1].population.begin(), tr3[1].population.end());
  double dim_diff = 0.0;
  for (std::size_t s = 0; s < states.size(); ++s)
    for (std::size_t i = 0; i < times.size(); ++i)
      dim_diff = std::max(dim_diff, std::abs(tr3[s].population[i] - tr5[s].population[i]));
  const bool ok = swap < 0.02 && idle_min > 0.98 && dim_diff < 1e-2;
  report(8, "population probes", ok,
         "|1_0 1000> at pi/(2g): " + fmt(swap) + " (< 0.02); min |1_0 0000> on [0,pi/g]: " + fmt(idle_min) +
             " (> 0.98); local_dim 3 vs 5 sup diff " + sci(dim_diff) + " (< 1e-2)");
}

void cross_module() {
  double h_diff = 0.0;
  for (const auto& g : {std::vector<double>(4, 1.0), cqed::preset_inhomogeneous_couplings()}) {
    const Operator h = cqed::rwa_hamiltonian(g);
    const auto sys = embedding::embed(cqed::embedded_matrix(g));
    h_diff = std::max(h_diff, (h.matrix() - sys.h.matrix()).cwiseAbs().maxCoeff());
  }
  const std::vector<double> g = cqed::preset_inhomogeneous_couplings();
  const auto sys = embedding::embed(cqed::embedded_matrix(g));
  double worst = 0.0;
  for (int n : {3, 5, 7}) {
    for (double k : {0.0, 0.3}) {
      for (double t : {0.4, 1.047, 1.7}) {
        const Matrix block = embedding::ancilla_one_block(embedding::rotation_sequence(sys, t, k, n));
        const auto phases = qsp::walk_phase_sequence(n, k);
        for (const auto& bits : cqed::computational_bitstrings(4)) {
          const Eigen::Index idx = cqed::computational_index(bits);
          const double lambda = cqed::embedded_singular_value(g, bits);
          worst = std::max(worst, std::abs(block(idx, idx) - qsp::qsp_response(phases, std::cos(lambda * t))));
        }
      }
    }
  }
  report(9, "cross-module consistency", h_diff == 0.0 && worst < 1e-10,
         "max |H_rwa - embed(A)| = " + sci(h_diff) + " (exact); max |sequence diag - qsp_response| = " + sci(worst) +
             " (tol 1e-10)");
}

}  // namespace

int main() {
  table_ii();
  table_iv();
  revival();
  walk_identities();
  closed_form();
  qsp_reflection();
  fsbsw_check();
  population_probe();
  cross_module();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
