#pragma once

#include <vector>

#include "qwalk/linalg.hpp"

namespace qwalk::embedding {

/// One 2x2 block of exp(-i H t): span{|1>|l>, |0>|r>} with Rabi frequency value.
struct Block {
  double value = 0.0;
  Vector left;
  Vector right;
  bool dark = false;
};

/// H = sigma_plus (x) A + sigma_minus (x) A^dagger on dims [2, d].
///
/// The ancilla uses the {|1>, |0>} ordering throughout, so the upper-left
/// d x d block of any operator on the system is the ancilla-|1> restriction.
struct EmbeddedSystem {
  Operator a;
  Operator h;
  SVDTriple decomposition;
  std::vector<Block> blocks;

  Eigen::Index system_dim() const { return a.side(); }
};

/// Projector onto the zero-singular-value left subspace plus the rotation angle.
struct RotationTarget {
  Matrix projector;
  double phi = 0.0;

  /// e^{-2 i phi} on the projector range, -1 on its complement.
  Matrix unitary() const;
};

EmbeddedSystem embed(const Operator& a);

/// exp(-i h t) by direct exponentiation.
Operator evolve_embedded(const EmbeddedSystem& sys, double t);

/// exp(-i h t) assembled from the per-singular-pair 2x2 blocks.
Operator evolve_blocks(const EmbeddedSystem& sys, double t);

/// S^{2N} W0 ... S^2 W0 S W0 with W0 = (R_z(2k) (x) I) exp(-i h t), S = R_z(4 pi / N) (x) I.
Operator rotation_sequence(const EmbeddedSystem& sys, double t, double k, int n);

/// Same construction with an externally supplied single interaction step.
Operator rotation_sequence_from_step(const Operator& interaction, double k, int n);

/// Upper-left (ancilla |1>) block of an operator on [2, d].
Matrix ancilla_one_block(const Operator& op);
/// Lower-right (ancilla |0>) block.
Matrix ancilla_zero_block(const Operator& op);

/// Projector onto the left singular vectors with zero singular value.
Matrix dark_left_projector(const EmbeddedSystem& sys);
Matrix dark_right_projector(const EmbeddedSystem& sys);

RotationTarget rotation_target(const EmbeddedSystem& sys, double k, int n);

/// Ideal ancilla-|1> restriction: e^{2iNk} on dark left vectors, -1 elsewhere.
Matrix ideal_rotation(const EmbeddedSystem& sys, double k, int n);

/// 2 |cos(value t)|^N
double error_bound(double value, double t, int n);

}  // namespace qwalk::embedding
