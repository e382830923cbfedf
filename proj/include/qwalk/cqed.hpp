#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/linalg.hpp"

namespace qwalk::cqed {

/// Star lattice of transmons: site 0 is the central ancilla, sites 1..N_q its
/// neighbours. Frequencies, anharmonicities and couplings are stored as
/// value / 2 pi in GHz; Hamiltonians are built in rad/ns, so times are in ns.
struct LatticeSpec {
  int n_neighbors = 4;
  std::vector<double> freq_ghz;      // size N_q + 1
  std::vector<double> anharm_ghz;    // size N_q + 1, negative
  std::vector<double> coupling_ghz;  // g_i0 / 2 pi, size N_q
  int local_dim = 3;

  /// Throws std::invalid_argument on a malformed spec.
  void validate() const;
  /// Human-readable notes, e.g. when |alpha / g_i0| < 10 for some neighbour.
  std::vector<std::string> warnings() const;
  /// max_i |omega_0 - omega_i - alpha_i|, zero when every CZ transition is resonant.
  double resonance_mismatch_ghz() const;
  /// min_i |alpha_i| / g over neighbours, with g the resonant Rabi coupling sqrt(2) g_i0.
  double min_anharmonicity_ratio() const;

  /// Neighbour frequencies set by the resonance omega_0 = omega_j + alpha_j,
  /// couplings given as the resonant |11>-|02> Rabi coupling g_j = sqrt(2) g_j0.
  static LatticeSpec resonant_star(double omega0_ghz, std::vector<double> anharm_ghz,
                                   std::vector<double> rabi_coupling_ghz, int local_dim = 3);
};

/// Anharmonicities alpha / 2 pi (GHz) for q0..q4 of the lab-frame study.
std::vector<double> preset_anharmonicities();
/// Same with the third value taken literally as -0.283 MHz.
std::vector<double> preset_anharmonicities_literal();
inline constexpr double kPresetOmega0Ghz = 5.15;
/// Relative couplings g_i / g of the inhomogeneous RWA study.
std::vector<double> preset_inhomogeneous_couplings();

/// Seeded Gaussian draws N(mean, (rel_sd * mean)^2).
std::vector<double> gaussian_draws(std::uint64_t seed, int count, double mean, double rel_sd);

Operator lab_hamiltonian(const LatticeSpec& spec);
/// Diagonal free part H_0 (rad/ns) on the full space.
RealVector free_energies(const LatticeSpec& spec);

/// Fixed total-excitation subspace of the lab Hamiltonian.
struct ExcitationSector {
  int excitations = 0;
  std::vector<int> dims;
  std::vector<std::vector<int>> states;  // digit labels
  std::vector<Eigen::Index> full_index;  // position in the full tensor space

  Eigen::Index size() const { return static_cast<Eigen::Index>(states.size()); }
  /// Position of a digit label inside the sector, or -1.
  Eigen::Index find(const std::vector<int>& digits) const;
};

ExcitationSector excitation_sector(const LatticeSpec& spec, int excitations);
Matrix sector_hamiltonian(const LatticeSpec& spec, const ExcitationSector& sector);
RealVector sector_free_energies(const LatticeSpec& spec, const ExcitationSector& sector);
/// Total excitation operator sum_i n_i on the full space.
Operator excitation_number(const LatticeSpec& spec);

/// sum_i g_i |1><2|_i on N_q three-level neighbours.
Operator embedded_matrix(const std::vector<double>& g);

/// sigma_0^{10} (x) sum_i g_i sigma_i^{12} + h.c., qubit ancilla in {|1>,|0>} order.
Operator rwa_hamiltonian(const std::vector<double>& g);

/// sqrt(sum_i J_i g_i^2)
double embedded_singular_value(const std::vector<double>& g, const std::vector<int>& bits);

/// Index of a computational neighbour bitstring inside [3]^N_q.
Eigen::Index computational_index(const std::vector<int>& bits);
std::vector<std::vector<int>> computational_bitstrings(int n_neighbors);

struct FidelityReport {
  Matrix m;  // ancilla-|1> restriction on neighbour computational states
  double fidelity = 0.0;
  double phi_star = 0.0;
  int n = 0;
  double t_g = 0.0;
  double g = 0.0;
  std::string model;  // "RWA" or "full"
  std::vector<double> beta;
  /// 1 - tr(M^dagger M) / n
  double leakage = 0.0;
};

/// Target restricted to the neighbour computational space: e^{-2 i phi} on
/// |0...0>, -1 elsewhere.
Vector rotation_target_diag(int n_neighbors, double phi);

/// Interleaved walk on the RWA Hamiltonian. Couplings and g in the same unit
/// as 1 / t_g (dimensionless g = 1 works).
FidelityReport simulate_rwa_sequence(const std::vector<double>& g, int n, double k, double t_g);

struct FullOptions {
  int phi_scan = 720;
  double k = 0.0;
};

/// Ancilla-|1> computational restriction of the lab-frame walk, after the
/// exp(+i H_0 T) frame correction.
Matrix full_sequence_restriction(const LatticeSpec& spec, int n, double t_g_ns, double k = 0.0);

/// Maximises the average gate fidelity over the target angle.
struct PhiOptimum {
  double phi = 0.0;
  double fidelity = 0.0;
};
PhiOptimum optimize_phi(const Matrix& m, int n_neighbors, int coarse_points = 720);

FidelityReport simulate_full_sequence(const LatticeSpec& spec, int n, double t_g_ns,
                                      const FullOptions& options = {});

struct PopulationTrace {
  std::string label;
  std::vector<int> state;
  std::vector<double> population;
};

/// |<init| exp(-i H_lab t) |init>|^2 on a time grid (ns).
std::vector<PopulationTrace> probe_initial_states(const LatticeSpec& spec,
                                                  const std::vector<std::vector<int>>& initial,
                                                  const std::vector<double>& times_ns);

std::string state_label(const std::vector<int>& digits);

/// Diagonal entry of the N = 3 walk on a block with rotation angle lambda.
std::complex<double> closed_form_f(double k, double lambda);

struct ClosedFormResult {
  std::vector<std::complex<double>> f;  // per neighbour bitstring, |0..0> first
  double fidelity = 0.0;
};

/// N = 3 fidelity from the closed form, ideal target diag(e^{6ik}, -1, ..., -1).
ClosedFormResult closed_form_rotation_fidelity(double k, double t, const std::vector<double>& g);

/// t_g = 0.333 pi / g
double standard_gate_time(double g);

}  // namespace qwalk::cqed
