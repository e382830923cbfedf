#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qwalk/linalg.hpp"

namespace qwalk::fsbsw {

/// |11> <-> |02> moves the excitation onto the second qubit of the pair,
/// |11> <-> |20> onto the first.
enum class Transition { to02, to20 };

/// Two-level Rabi rotation on one qubit pair; duration in units of pi / g.
struct ResonantGate {
  int first = 0;
  int second = 1;
  double duration = 1.0;
  Transition transition = Transition::to02;
};

/// One step of the sequence: a resonant gate, or an instantaneous NOT on one qubit.
struct Step {
  bool is_not = false;
  ResonantGate gate;
  int qubit = 0;
};

struct Sequence {
  int n = 0;
  std::vector<Step> steps;
  std::vector<int> flipped;  // computational bitstring that picks up -1

  /// Sum of resonant gate durations, in units of pi / g.
  double duration() const;
  std::vector<ResonantGate> resonant_gates() const;
};

/// Hide-phase-unhide construction of C_{n-1}Z, n >= 3, total duration (2n - 3) pi / g.
Sequence build_fsbsw_sequence(int n);

/// Composes the sequence on n three-level systems (3^n space). NOT gates act
/// on the {|0>, |1>} levels only. Qubits in not_conjugate receive an extra NOT
/// before and after the whole sequence.
Operator simulate_fsbsw(const Sequence& seq, const std::vector<int>& not_conjugate = {});
Operator simulate_fsbsw(int n, const std::vector<int>& not_conjugate = {});

/// Diagonal of the computational-subspace restriction and the largest
/// off-diagonal modulus there.
struct ComputationalSummary {
  std::vector<std::vector<int>> bitstrings;
  std::vector<cplx> diagonal;
  double max_offdiag = 0.0;
  std::vector<std::vector<int>> minus_one;  // entries within tol of -1
  bool diagonal_pm_one = false;
};

ComputationalSummary summarize(const Operator& u, int n, double tol = 1e-10);

struct CostRow {
  std::string method;
  int n = 0;
  double two_qubit_time_cz = 0.0;
  std::optional<int> single_qubit_count;  // empty: not counted
  std::string note;
};

/// Rows for this work (walk with the given N, t_g = 0.333 pi / g), FSBSW, and
/// the single/two-qubit decomposition where a count is known.
std::vector<CostRow> cost_comparison(int n, int walk_n = 5);

std::string cost_csv(const std::vector<CostRow>& rows);

}  // namespace qwalk::fsbsw
