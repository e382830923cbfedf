#pragma once

#include <string>
#include <vector>

#include "qwalk/linalg.hpp"
#include "qwalk/qsp.hpp"

namespace qwalk::ion {

/// Largest neighbour count accepted by the block-form routines.
inline constexpr int kMaxNeighbors = 12;
/// Largest neighbour count for which full-space matrices are materialised.
inline constexpr int kMaxDenseNeighbors = 10;

/// exp(-i (theta/4) (cos varphi S_x + sin varphi S_y)^2) on n_ions spins, S = (1/2) sum_j sigma_j.
Operator ms_unitary(double theta, double varphi, int n_ions);

/// Collective x-spin of the neighbours: eigenvalues lambda of (1/2) sum_{j>=1} sigma_j^x
/// in the product x basis, listed in computational order of the x labels.
std::vector<double> neighbor_x_spins(int n_neighbors);

/// Hadamard on every neighbour, identity on the ancilla (site 0).
Operator neighbor_hadamard(int n_neighbors);

/// U_MS(-theta, 0) exp(i (pi/2) sigma_0^z) U_MS(theta, 0), ancilla is site 0.
Operator ion_walk_w0(double theta, int n_neighbors);
/// Block form: sum_lambda |lambda><lambda| (x) exp[i (pi/2)(cos(theta lambda/2) sigma_z + sin(theta lambda/2) sigma_y)].
Operator ion_walk_w0_blocks(double theta, int n_neighbors);

/// S_0 (w_0 exp(i (pi/2) sigma_0^z)) with S_0 = exp(i phi sigma_0^z).
Operator ion_walk_step(double theta, double phi, int n_neighbors);
/// -S_0 [[c, i s], [i s, c]] per block, c = cos(theta lambda / 2).
Operator ion_walk_step_blocks(double theta, double phi, int n_neighbors);

/// 2x2 ancilla block of the walk step for collective spin lambda.
Matrix ion_step_block(double theta, double phi, double lambda);

struct ReflectionResult {
  Vector restriction;  // diagonal of the ancilla block on the neighbours, product x basis
  Vector target;       // ideal diagonal in the same basis
  double fidelity = 0.0;
  long balanced_dimension = 0;
  double bound = 0.0;  // 2 max_{lambda != 0} |cos(theta lambda / 2)|^N
};

/// Walk S^{2N} W_0 ... S W_0 with S = exp(i (2 pi / N) sigma_0^z). The target is
/// e^{+-2 i N phi} on the balanced (lambda = 0) subspace and -1 elsewhere; the
/// sign follows the ancilla state (ancilla_one = true picks |1>, +).
ReflectionResult ion_reflection(int n_neighbors, double theta, int n, double phi = 0.0, bool ancilla_one = true);

/// Full walk operator in the computational basis (n_neighbors <= kMaxDenseNeighbors).
Operator ion_reflection_operator(int n_neighbors, double theta, int n, double phi = 0.0);

enum class Mechanism { walk, qsp };

struct PartitionResult {
  Mechanism mechanism = Mechanism::walk;
  std::vector<long> weights;
  std::vector<std::vector<int>> zero_sum_states;  // spins z_j = +-1
  bool has_solution = false;
  Vector oracle;  // diagonal of the ancilla-|1> block, computational basis
  Vector target;
  double fidelity = 0.0;
  double theta = 0.0;
  int n_steps = 0;  // walk N, or QSP degree
  qsp::PhaseSequence phases;
  std::string note;

  Operator oracle_operator() const;
};

/// sum_j a_j z_j for a neighbour basis index; digit 0 of the index is |1>, z = +1.
long signed_sum(const std::vector<long>& weights, std::size_t label);

/// Every assignment z in {+-1}^n with sum a_j z_j = 0, by enumeration.
std::vector<std::vector<int>> brute_force_partitions(const std::vector<long>& weights);

PartitionResult partition_oracle(const std::vector<long>& weights, Mechanism mechanism);

/// e^{i H_R t} e^{i phi sigma_0^x} e^{-i H_R t}, H_R = sum_j V_0j sigma_0^z sigma_j^z.
Operator rydberg_walk_w0(const std::vector<double>& couplings, double t, double phi);
/// Block form exp[i phi (cos(2 t s) sigma_x - sin(2 t s) sigma_y)], s = sum_j V_0j z_j.
Operator rydberg_walk_w0_blocks(const std::vector<double>& couplings, double t, double phi);

Mechanism parse_mechanism(const std::string& name);
std::string to_string(Mechanism m);

}  // namespace qwalk::ion
