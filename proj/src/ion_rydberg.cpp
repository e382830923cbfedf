#include "qwalk/ion_rydberg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qwalk::ion {

using std::numbers::pi;

namespace {

void check_neighbors(int n, int cap) {
  if (n < 1 || n > cap) {
    throw std::invalid_argument("neighbour count must be in [1, " + std::to_string(cap) + "]");
  }
}

std::vector<int> qubit_dims(int n_sites) { return std::vector<int>(static_cast<std::size_t>(n_sites), 2); }

int digit(std::size_t label, int j, int n) { return static_cast<int>((label >> (n - 1 - j)) & 1U); }

// i (n . sigma) = exp(i (pi/2) n . sigma) for a unit vector n.
Matrix i_dot_sigma(double nx, double ny, double nz) {
  return cplx(0, 1) * (nx * pauli::x() + ny * pauli::y() + nz * pauli::z());
}

// Full operator with one 2x2 ancilla block per neighbour basis label.
Operator assemble_blocks(int n_neighbors, const std::function<Matrix(std::size_t)>& block) {
  const std::size_t d = std::size_t{1} << n_neighbors;
  Matrix m = Matrix::Zero(2 * d, 2 * d);
  for (std::size_t c = 0; c < d; ++c) {
    const Matrix b = block(c);
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < 2; ++s) m(r * d + c, s * d + c) = b(r, s);
    }
  }
  return Operator(std::move(m), qubit_dims(n_neighbors + 1));
}

Operator x_basis_blocks(int n_neighbors, const std::function<Matrix(double)>& block) {
  const auto lambdas = neighbor_x_spins(n_neighbors);
  const Operator had = neighbor_hadamard(n_neighbors);
  return had * assemble_blocks(n_neighbors, [&](std::size_t c) { return block(lambdas[c]); }) * had;
}

Matrix walk_block(double theta, double phi, double lambda, int n) {
  const Matrix step = ion_step_block(theta, phi, lambda);
  Matrix w = Matrix::Identity(2, 2);
  for (int m = 1; m <= 2 * n; ++m) w = phase_z(2.0 * pi * m / n) * step * w;
  return w;
}

double diagonal_fidelity(const Vector& m, const Vector& target) {
  const double n = static_cast<double>(m.size());
  const cplx overlap = (m.array() * target.conjugate().array()).sum();
  return (std::norm(overlap) + m.squaredNorm()) / (n * (n + 1.0));
}

long binomial(int n, int k) {
  long b = 1;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

}  // namespace

Operator ms_unitary(double theta, double varphi, int n_ions) {
  check_neighbors(n_ions, kMaxDenseNeighbors + 1);
  const auto dims = qubit_dims(n_ions);
  Operator a = Operator::zero(dims);
  const Matrix local = 0.5 * (std::cos(varphi) * pauli::x() + std::sin(varphi) * pauli::y());
  for (int j = 0; j < n_ions; ++j) a += embed_site(local, j, dims);
  return matexp_hermitian(a * a, theta / 4.0);
}

std::vector<double> neighbor_x_spins(int n_neighbors) {
  check_neighbors(n_neighbors, kMaxNeighbors);
  const std::size_t d = std::size_t{1} << n_neighbors;
  std::vector<double> out(d);
  for (std::size_t c = 0; c < d; ++c) {
    int ones = 0;
    for (int j = 0; j < n_neighbors; ++j) ones += digit(c, j, n_neighbors);
    out[c] = 0.5 * (n_neighbors - 2 * ones);
  }
  return out;
}

Operator neighbor_hadamard(int n_neighbors) {
  check_neighbors(n_neighbors, kMaxDenseNeighbors);
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  std::vector<Operator> factors{Operator::identity({2})};
  for (int j = 0; j < n_neighbors; ++j) factors.emplace_back(h);
  return kron(factors);
}

Operator ion_walk_w0(double theta, int n_neighbors) {
  check_neighbors(n_neighbors, kMaxDenseNeighbors);
  const int ions = n_neighbors + 1;
  const Operator kick = embed_site(phase_z(pi / 2.0), 0, qubit_dims(ions));
  return ms_unitary(-theta, 0.0, ions) * kick * ms_unitary(theta, 0.0, ions);
}

Operator ion_walk_w0_blocks(double theta, int n_neighbors) {
  return x_basis_blocks(n_neighbors, [theta](double lambda) {
    const double chi = theta * lambda / 2.0;
    return i_dot_sigma(0.0, std::sin(chi), std::cos(chi));
  });
}

Matrix ion_step_block(double theta, double phi, double lambda) {
  const double chi = theta * lambda / 2.0;
  return phase_z(phi) * i_dot_sigma(0.0, std::sin(chi), std::cos(chi)) * phase_z(pi / 2.0);
}

Operator ion_walk_step(double theta, double phi, int n_neighbors) {
  const auto dims = qubit_dims(n_neighbors + 1);
  return embed_site(phase_z(phi), 0, dims) * ion_walk_w0(theta, n_neighbors) *
         embed_site(phase_z(pi / 2.0), 0, dims);
}

Operator ion_walk_step_blocks(double theta, double phi, int n_neighbors) {
  return x_basis_blocks(n_neighbors, [theta, phi](double lambda) {
    const double c = std::cos(theta * lambda / 2.0);
    const double s = std::sin(theta * lambda / 2.0);
    Matrix coin(2, 2);
    coin << c, cplx(0, s), cplx(0, s), c;
    return Matrix(-phase_z(phi) * coin);
  });
}

ReflectionResult ion_reflection(int n_neighbors, double theta, int n, double phi, bool ancilla_one) {
  check_neighbors(n_neighbors, kMaxNeighbors);
  if (n_neighbors % 2 != 0) {
    throw std::invalid_argument("ion_reflection: the balanced subspace exists only for an even number of ions");
  }
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("ion_reflection: N must be a positive odd integer");
  const int a = ancilla_one ? 0 : 1;
  const cplx dark_phase = std::polar(1.0, (ancilla_one ? 2.0 : -2.0) * n * phi);

  std::map<int, cplx> per_ones;
  ReflectionResult res;
  for (int k = 0; k <= n_neighbors; ++k) {
    const double lambda = 0.5 * (n_neighbors - 2 * k);
    per_ones[k] = walk_block(theta, phi, lambda, n)(a, a);
    if (lambda != 0.0) res.bound = std::max(res.bound, 2.0 * std::pow(std::abs(std::cos(theta * lambda / 2.0)), n));
  }
  const std::size_t d = std::size_t{1} << n_neighbors;
  res.restriction.resize(static_cast<Eigen::Index>(d));
  res.target.resize(static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) {
    int ones = 0;
    for (int j = 0; j < n_neighbors; ++j) ones += digit(c, j, n_neighbors);
    const bool balanced = 2 * ones == n_neighbors;
    res.restriction(c) = per_ones[ones];
    res.target(c) = balanced ? dark_phase : cplx(-1.0);
  }
  res.balanced_dimension = binomial(n_neighbors, n_neighbors / 2);
  res.fidelity = diagonal_fidelity(res.restriction, res.target);
  return res;
}

Operator ion_reflection_operator(int n_neighbors, double theta, int n, double phi) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("ion_reflection: N must be a positive odd integer");
  return x_basis_blocks(n_neighbors, [=](double lambda) { return walk_block(theta, phi, lambda, n); });
}

long signed_sum(const std::vector<long>& weights, std::size_t label) {
  const int n = static_cast<int>(weights.size());
  long s = 0;
  for (int j = 0; j < n; ++j) s += digit(label, j, n) == 0 ? weights[j] : -weights[j];
  return s;
}

std::vector<std::vector<int>> brute_force_partitions(const std::vector<long>& weights) {
  const int n = static_cast<int>(weights.size());
  std::vector<std::vector<int>> out;
  for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
    if (signed_sum(weights, c) != 0) continue;
    std::vector<int> z(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) z[j] = digit(c, j, n) == 0 ? 1 : -1;
    out.push_back(std::move(z));
  }
  return out;
}

Operator PartitionResult::oracle_operator() const {
  const int n = static_cast<int>(weights.size());
  return Operator(Matrix(oracle.asDiagonal()), qubit_dims(n));
}

namespace {

// Coin angle minimising max_m |cos(theta m / 4)| over the achievable nonzero sums.
double pick_theta(const std::set<long>& sums, double& worst) {
  auto objective = [&](double th) {
    double w = 0.0;
    for (long m : sums) w = std::max(w, std::abs(std::cos(th * static_cast<double>(m) / 4.0)));
    return w;
  };
  constexpr int kCoarse = 20000;
  double best = 0.0;
  worst = 1.0;
  for (int i = 1; i < kCoarse; ++i) {
    const double th = 4.0 * pi * i / kCoarse;
    const double v = objective(th);
    if (v < worst - 1e-15) {
      worst = v;
      best = th;
    }
  }
  double step = 4.0 * pi / kCoarse;
  for (int round = 0; round < 30; ++round) {
    step /= 4.0;
    for (int i = -8; i <= 8; ++i) {
      const double th = best + i * step;
      const double v = objective(th);
      if (v < worst) {
        worst = v;
        best = th;
      }
    }
  }
  return best;
}

}  // namespace

PartitionResult partition_oracle(const std::vector<long>& weights, Mechanism mechanism) {
  const int n = static_cast<int>(weights.size());
  if (n < 2) throw std::invalid_argument("partition_oracle: need at least two integers");
  check_neighbors(n, kMaxNeighbors);

  PartitionResult res;
  res.mechanism = mechanism;
  res.weights = weights;
  res.zero_sum_states = brute_force_partitions(weights);
  res.has_solution = !res.zero_sum_states.empty();

  const std::size_t d = std::size_t{1} << n;
  std::set<long> sums;
  for (std::size_t c = 0; c < d; ++c) {
    const long s = signed_sum(weights, c);
    if (s != 0) sums.insert(std::abs(s));
  }
  double worst = 1.0;
  res.theta = pick_theta(sums, worst);
  if (worst >= 1.0 - 1e-12) throw std::runtime_error("partition_oracle: no coin angle separates the sums");

  res.target.resize(static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) res.target(c) = signed_sum(weights, c) == 0 ? 1.0 : -1.0;

  std::map<long, cplx> value;
  if (mechanism == Mechanism::walk) {
    int steps = 1;
    while (steps < 101 && 2.0 * std::pow(worst, steps) >= 1e-6) steps += 2;
    res.n_steps = steps;
    value[0] = walk_block(res.theta, 0.0, 0.0, steps)(0, 0);
    for (long m : sums) {
      value[m] = walk_block(res.theta, 0.0, 0.5 * static_cast<double>(m), steps)(0, 0);
      value[-m] = walk_block(res.theta, 0.0, -0.5 * static_cast<double>(m), steps)(0, 0);
    }
  } else {
    std::vector<double> roots;
    for (long m : sums) {
      const double r = std::abs(std::cos(res.theta * static_cast<double>(m) / 4.0));
      if (std::none_of(roots.begin(), roots.end(), [r](double q) { return std::abs(q - r) < 1e-9; })) {
        roots.push_back(r);
      }
    }
    const qsp::TargetPolynomial target = qsp::target_poly_roots(roots);
    if (!qsp::check_target(target, target.degree).ok()) {
      throw std::runtime_error("partition_oracle: reflection polynomial is not achievable for this instance");
    }
    const auto found = qsp::find_phases(target, target.degree);
    if (!found.converged) {
      throw std::runtime_error("partition_oracle: phase finding did not converge (" + found.message + ")");
    }
    res.phases = found.seq;
    res.n_steps = target.degree;
    value[0] = qsp::qsp_response(res.phases, 1.0);
    for (long m : sums) {
      const cplx v = qsp::qsp_response(res.phases, std::cos(res.theta * static_cast<double>(m) / 4.0));
      value[m] = v;
      value[-m] = v;
    }
  }
  res.oracle.resize(static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) res.oracle(c) = value.at(signed_sum(weights, c));
  res.fidelity = diagonal_fidelity(res.oracle, res.target);
  res.note = res.has_solution ? "reflection about the zero-sum subspace"
                              : "no balanced partition; oracle is -I up to phase";
  return res;
}

Operator rydberg_walk_w0(const std::vector<double>& couplings, double t, double phi) {
  const int n = static_cast<int>(couplings.size());
  check_neighbors(n, kMaxDenseNeighbors);
  const auto dims = qubit_dims(n + 1);
  const Operator z0 = embed_site(pauli::z(), 0, dims);
  Operator h = Operator::zero(dims);
  for (int j = 0; j < n; ++j) h += cplx(couplings[j]) * (z0 * embed_site(pauli::z(), j + 1, dims));
  const Matrix flip = std::cos(phi) * pauli::identity() + cplx(0, std::sin(phi)) * pauli::x();
  return matexp_hermitian(h, -t) * embed_site(flip, 0, dims) * matexp_hermitian(h, t);
}

Operator rydberg_walk_w0_blocks(const std::vector<double>& couplings, double t, double phi) {
  const int n = static_cast<int>(couplings.size());
  check_neighbors(n, kMaxNeighbors);
  return assemble_blocks(n, [&](std::size_t c) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += digit(c, j, n) == 0 ? couplings[j] : -couplings[j];
    const Matrix axis = std::cos(2.0 * t * s) * pauli::x() - std::sin(2.0 * t * s) * pauli::y();
    return Matrix(std::cos(phi) * pauli::identity() + cplx(0, std::sin(phi)) * axis);
  });
}

Mechanism parse_mechanism(const std::string& name) {
  if (name == "walk") return Mechanism::walk;
  if (name == "qsp") return Mechanism::qsp;
  throw std::invalid_argument("unknown mechanism '" + name + "' (expected walk or qsp)");
}

std::string to_string(Mechanism m) { return m == Mechanism::walk ? "walk" : "qsp"; }

}  // namespace qwalk::ion
