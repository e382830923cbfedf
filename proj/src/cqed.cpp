#include "qwalk/cqed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qwalk/matrix_embedding.hpp"

namespace qwalk::cqed {

using std::numbers::pi;

namespace {

constexpr double kTwoPi = 2.0 * pi;

std::vector<int> lattice_dims(const LatticeSpec& spec) {
  return std::vector<int>(static_cast<std::size_t>(spec.n_neighbors + 1), spec.local_dim);
}

double level_energy(const LatticeSpec& spec, int site, int n) {
  const double w = kTwoPi * spec.freq_ghz[site];
  const double a = kTwoPi * spec.anharm_ghz[site];
  return w * n + 0.5 * a * n * (n - 1);
}

Matrix sigma_ij(int d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

// Virtual z rotation of the transmon ancilla: exp(i theta (n - 1/2)).
cplx ancilla_z_phase(double theta, int level) { return std::polar(1.0, theta * (level - 0.5)); }

}  // namespace

void LatticeSpec::validate() const {
  if (n_neighbors < 1) throw std::invalid_argument("LatticeSpec: need at least one neighbour");
  const auto sites = static_cast<std::size_t>(n_neighbors + 1);
  if (freq_ghz.size() != sites || anharm_ghz.size() != sites) {
    throw std::invalid_argument("LatticeSpec: freq/anharm lists must have N_q + 1 entries");
  }
  if (coupling_ghz.size() != static_cast<std::size_t>(n_neighbors)) {
    throw std::invalid_argument("LatticeSpec: coupling list must have N_q entries");
  }
  if (local_dim < 2 || local_dim > 9) throw std::invalid_argument("LatticeSpec: local_dim must be in [2, 9]");
  if (std::any_of(anharm_ghz.begin(), anharm_ghz.end(), [](double a) { return !(a < 0.0); })) {
    throw std::invalid_argument("LatticeSpec: anharmonicities must be negative");
  }
}

std::vector<std::string> LatticeSpec::warnings() const {
  std::vector<std::string> out;
  for (int i = 1; i <= n_neighbors; ++i) {
    const double g = coupling_ghz[i - 1];
    if (g != 0.0 && std::abs(anharm_ghz[i] / g) < 10.0) {
      std::ostringstream os;
      os << "neighbour " << i << ": |alpha/g| = " << std::abs(anharm_ghz[i] / g) << " < 10";
      out.push_back(os.str());
    }
  }
  return out;
}

double LatticeSpec::resonance_mismatch_ghz() const {
  double worst = 0.0;
  for (int i = 1; i <= n_neighbors; ++i) {
    worst = std::max(worst, std::abs(freq_ghz[0] - freq_ghz[i] - anharm_ghz[i]));
  }
  return worst;
}

double LatticeSpec::min_anharmonicity_ratio() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n_neighbors; ++i) {
    const double g = std::sqrt(2.0) * coupling_ghz[i - 1];
    if (g > 0.0) best = std::min(best, std::abs(anharm_ghz[i]) / g);
  }
  return best;
}

LatticeSpec LatticeSpec::resonant_star(double omega0_ghz, std::vector<double> anharm_ghz,
                                       std::vector<double> rabi_coupling_ghz, int local_dim) {
  LatticeSpec spec;
  spec.n_neighbors = static_cast<int>(rabi_coupling_ghz.size());
  spec.local_dim = local_dim;
  if (anharm_ghz.size() != rabi_coupling_ghz.size() + 1) {
    throw std::invalid_argument("resonant_star: need N_q + 1 anharmonicities");
  }
  spec.anharm_ghz = std::move(anharm_ghz);
  spec.freq_ghz.push_back(omega0_ghz);
  for (int i = 1; i <= spec.n_neighbors; ++i) spec.freq_ghz.push_back(omega0_ghz - spec.anharm_ghz[i]);
  for (double g : rabi_coupling_ghz) spec.coupling_ghz.push_back(g / std::sqrt(2.0));
  spec.validate();
  return spec;
}

std::vector<double> preset_anharmonicities() { return {-0.262, -0.249, -0.283, -0.295, -0.290}; }

std::vector<double> preset_anharmonicities_literal() { return {-0.262, -0.249, -0.000283, -0.295, -0.290}; }

std::vector<double> preset_inhomogeneous_couplings() { return {0.85, 0.99, 0.91, 1.02}; }

std::vector<double> gaussian_draws(std::uint64_t seed, int count, double mean, double rel_sd) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(mean, std::abs(rel_sd * mean));
  std::vector<double> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = dist(rng);
  return out;
}

RealVector free_energies(const LatticeSpec& spec) {
  spec.validate();
  const auto dims = lattice_dims(spec);
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  RealVector e(total);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    const auto digits = digits_of(idx, dims);
    double v = 0.0;
    for (std::size_t s = 0; s < digits.size(); ++s) v += level_energy(spec, static_cast<int>(s), digits[s]);
    e(idx) = v;
  }
  return e;
}

Operator lab_hamiltonian(const LatticeSpec& spec) {
  spec.validate();
  const auto dims = lattice_dims(spec);
  const int d = spec.local_dim;
  const Matrix b = annihilation(d);
  Operator h(free_energies(spec).cast<cplx>().asDiagonal(), dims);
  const Operator b0 = embed_site(b, 0, dims);
  const Operator b0_dag = b0.adjoint();
  for (int i = 1; i <= spec.n_neighbors; ++i) {
    const double g = kTwoPi * spec.coupling_ghz[i - 1];
    const Operator bi = embed_site(b, i, dims);
    h += cplx(g) * (bi * b0_dag + b0 * bi.adjoint());
  }
  return h;
}

Eigen::Index ExcitationSector::find(const std::vector<int>& digits) const {
  auto it = std::find(states.begin(), states.end(), digits);
  return it == states.end() ? -1 : static_cast<Eigen::Index>(it - states.begin());
}

ExcitationSector excitation_sector(const LatticeSpec& spec, int excitations) {
  spec.validate();
  ExcitationSector sector;
  sector.excitations = excitations;
  sector.dims = lattice_dims(spec);
  Eigen::Index total = 1;
  for (int d : sector.dims) total *= d;
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    auto digits = digits_of(idx, sector.dims);
    int sum = 0;
    for (int v : digits) sum += v;
    if (sum != excitations) continue;
    sector.states.push_back(std::move(digits));
    sector.full_index.push_back(idx);
  }
  return sector;
}

RealVector sector_free_energies(const LatticeSpec& spec, const ExcitationSector& sector) {
  RealVector e(sector.size());
  for (Eigen::Index s = 0; s < sector.size(); ++s) {
    double v = 0.0;
    for (std::size_t site = 0; site < sector.states[s].size(); ++site) {
      v += level_energy(spec, static_cast<int>(site), sector.states[s][site]);
    }
    e(s) = v;
  }
  return e;
}

Matrix sector_hamiltonian(const LatticeSpec& spec, const ExcitationSector& sector) {
  const Eigen::Index n = sector.size();
  Matrix h = Matrix::Zero(n, n);
  h.diagonal() = sector_free_energies(spec, sector).cast<cplx>();
  const int d = spec.local_dim;
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto& st = sector.states[s];
    // b_i b_0^dagger moves one excitation from neighbour i to the ancilla.
    for (int i = 1; i <= spec.n_neighbors; ++i) {
      if (st[i] == 0 || st[0] == d - 1) continue;
      auto to = st;
      to[i] -= 1;
      to[0] += 1;
      const Eigen::Index t = sector.find(to);
      const double amp = kTwoPi * spec.coupling_ghz[i - 1] * std::sqrt(double(st[i]) * (st[0] + 1));
      h(t, s) += amp;
      h(s, t) += amp;
    }
  }
  return h;
}

Operator excitation_number(const LatticeSpec& spec) {
  const auto dims = lattice_dims(spec);
  const Matrix n = annihilation(spec.local_dim).adjoint() * annihilation(spec.local_dim);
  Operator total = Operator::zero(dims);
  for (std::size_t i = 0; i < dims.size(); ++i) total += embed_site(n, static_cast<int>(i), dims);
  return total;
}

Operator embedded_matrix(const std::vector<double>& g) {
  if (g.empty()) throw std::invalid_argument("embedded_matrix: need at least one coupling");
  const std::vector<int> dims(g.size(), 3);
  Operator a = Operator::zero(dims);
  const Matrix s12 = sigma_ij(3, 1, 2);
  for (std::size_t i = 0; i < g.size(); ++i) a += cplx(g[i]) * embed_site(s12, static_cast<int>(i), dims);
  return a;
}

Operator rwa_hamiltonian(const std::vector<double>& g) {
  if (g.empty()) throw std::invalid_argument("rwa_hamiltonian: need at least one coupling");
  // Built from explicit tensor products so it can be checked against embed().
  const auto nq = static_cast<int>(g.size());
  Operator h = Operator::zero([&] {
    std::vector<int> dims{2};
    dims.insert(dims.end(), g.size(), 3);
    return dims;
  }());
  const Operator anc_up(pauli::plus());    // sigma_0^{10} = |1><0|
  const Operator anc_down(pauli::minus());  // sigma_0^{01}
  for (int i = 0; i < nq; ++i) {
    std::vector<Operator> up{anc_up}, down{anc_down};
    for (int j = 0; j < nq; ++j) {
      up.emplace_back(j == i ? sigma_ij(3, 1, 2) : Matrix(Matrix::Identity(3, 3)));
      down.emplace_back(j == i ? sigma_ij(3, 2, 1) : Matrix(Matrix::Identity(3, 3)));
    }
    h += cplx(g[i]) * (kron(up) + kron(down));
  }
  return h;
}

double embedded_singular_value(const std::vector<double>& g, const std::vector<int>& bits) {
  if (bits.size() != g.size()) throw std::invalid_argument("embedded_singular_value: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += bits[i] * g[i] * g[i];
  return std::sqrt(s);
}

std::vector<std::vector<int>> computational_bitstrings(int n_neighbors) {
  std::vector<std::vector<int>> out;
  const int count = 1 << n_neighbors;
  for (int v = 0; v < count; ++v) {
    std::vector<int> bits(static_cast<std::size_t>(n_neighbors));
    for (int i = 0; i < n_neighbors; ++i) bits[i] = (v >> (n_neighbors - 1 - i)) & 1;
    out.push_back(std::move(bits));
  }
  return out;
}

Eigen::Index computational_index(const std::vector<int>& bits) {
  const std::vector<int> dims(bits.size(), 3);
  return flat_index(bits, dims);
}

Vector rotation_target_diag(int n_neighbors, double phi) {
  Vector u = Vector::Constant(Eigen::Index{1} << n_neighbors, cplx(-1.0));
  u(0) = std::polar(1.0, -2.0 * phi);
  return u;
}

FidelityReport simulate_rwa_sequence(const std::vector<double>& g, int n, double k, double t_g) {
  const auto nq = static_cast<int>(g.size());
  const Operator h = rwa_hamiltonian(g);
  const Operator w = embedding::rotation_sequence_from_step(matexp_hermitian(h, t_g), k, n);
  const Matrix block = embedding::ancilla_one_block(w);

  const auto bits = computational_bitstrings(nq);
  const auto dim = static_cast<Eigen::Index>(bits.size());
  Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = block(computational_index(bits[r]), computational_index(bits[c]));
    }
  }
  FidelityReport rep;
  rep.phi_star = pi - n * k;
  rep.fidelity = average_gate_fidelity_diag(m, rotation_target_diag(nq, rep.phi_star));
  rep.leakage = 1.0 - m.cwiseAbs2().sum() / static_cast<double>(dim);
  rep.m = std::move(m);
  rep.n = n;
  rep.t_g = t_g;
  rep.g = *std::max_element(g.begin(), g.end());
  rep.model = "RWA";
  return rep;
}

Matrix full_sequence_restriction(const LatticeSpec& spec, int n, double t_g_ns, double k) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("simulate_full_sequence: N must be a positive odd integer");
  spec.validate();
  const int nq = spec.n_neighbors;
  const auto bits = computational_bitstrings(nq);
  const auto dim = static_cast<Eigen::Index>(bits.size());
  Matrix m = Matrix::Zero(dim, dim);
  const double total_time = 2.0 * n * t_g_ns;
  const double step = 2.0 * pi / n;

  // H_lab conserves the total excitation number, so the walk is block
  // diagonal over sectors; ancilla-|1> computational states live in 1..N_q+1.
  for (int e = 1; e <= nq + 1; ++e) {
    const ExcitationSector sector = excitation_sector(spec, e);
    const Matrix h = sector_hamiltonian(spec, sector);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    Vector phases(eig.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, -eig.eigenvalues()(i) * t_g_ns);
    const Matrix u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();

    Matrix w = Matrix::Identity(sector.size(), sector.size());
    for (int step_idx = 1; step_idx <= 2 * n; ++step_idx) {
      w = u * w;
      // R_z(2k) then S^m, both on the ancilla.
      const double angle = 2.0 * k + 2.0 * step * step_idx;
      for (Eigen::Index s = 0; s < sector.size(); ++s) w.row(s) *= ancilla_z_phase(angle, sector.states[s][0]);
    }
    const RealVector e0 = sector_free_energies(spec, sector);
    for (Eigen::Index s = 0; s < sector.size(); ++s) w.row(s) *= std::polar(1.0, e0(s) * total_time);

    for (Eigen::Index r = 0; r < dim; ++r) {
      std::vector<int> row_state{1};
      row_state.insert(row_state.end(), bits[r].begin(), bits[r].end());
      const Eigen::Index rs = sector.find(row_state);
      if (rs < 0) continue;
      for (Eigen::Index c = 0; c < dim; ++c) {
        std::vector<int> col_state{1};
        col_state.insert(col_state.end(), bits[c].begin(), bits[c].end());
        const Eigen::Index cs = sector.find(col_state);
        if (cs >= 0) m(r, c) = w(rs, cs);
      }
    }
  }
  return m;
}

PhiOptimum optimize_phi(const Matrix& m, int n_neighbors, int coarse_points) {
  if (coarse_points < 8) throw std::invalid_argument("optimize_phi: need at least 8 scan points");
  auto fid = [&](double phi) { return average_gate_fidelity_diag(m, rotation_target_diag(n_neighbors, phi)); };
  const double h = 2.0 * pi / coarse_points;
  double best_phi = 0.0, best_f = -1.0;
  for (int i = 0; i < coarse_points; ++i) {
    const double phi = i * h;
    const double f = fid(phi);
    if (f > best_f) {
      best_f = f;
      best_phi = phi;
    }
  }
  // Golden-section refinement on the bracketing interval.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_phi - h, b = best_phi + h;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = fid(c), fd = fid(d);
  for (int it = 0; it < 100 && b - a > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fid(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fid(d);
    }
  }
  double phi = 0.5 * (a + b);
  // F(phi) has period pi; report the representative in [pi/2, 3 pi/2).
  phi = std::fmod(std::fmod(phi, pi) + pi, pi);
  if (phi < pi / 2.0) phi += pi;
  return {phi, std::max(best_f, fid(phi))};
}

FidelityReport simulate_full_sequence(const LatticeSpec& spec, int n, double t_g_ns, const FullOptions& options) {
  FidelityReport rep;
  rep.m = full_sequence_restriction(spec, n, t_g_ns, options.k);
  const auto opt = optimize_phi(rep.m, spec.n_neighbors, options.phi_scan);
  rep.fidelity = opt.fidelity;
  rep.phi_star = opt.phi;
  rep.n = n;
  rep.t_g = t_g_ns;
  rep.g = std::sqrt(2.0) * *std::max_element(spec.coupling_ghz.begin(), spec.coupling_ghz.end());
  rep.model = "full";
  rep.leakage = 1.0 - rep.m.cwiseAbs2().sum() / static_cast<double>(rep.m.rows());
  const double total_time = 2.0 * n * t_g_ns;
  for (int i = 1; i <= spec.n_neighbors; ++i) {
    rep.beta.push_back(std::fmod(kTwoPi * spec.freq_ghz[i] * total_time, kTwoPi));
  }
  return rep;
}

std::string state_label(const std::vector<int>& digits) {
  std::string s = "|";
  for (int v : digits) s += std::to_string(v);
  return s + ">";
}

std::vector<PopulationTrace> probe_initial_states(const LatticeSpec& spec,
                                                  const std::vector<std::vector<int>>& initial,
                                                  const std::vector<double>& times_ns) {
  spec.validate();
  std::vector<PopulationTrace> out;
  for (const auto& state : initial) {
    if (state.size() != static_cast<std::size_t>(spec.n_neighbors + 1)) {
      throw std::invalid_argument("probe_initial_states: state label has wrong length");
    }
    int e = 0;
    for (int v : state) {
      if (v < 0 || v >= spec.local_dim) throw std::invalid_argument("probe_initial_states: level out of range");
      e += v;
    }
    const ExcitationSector sector = excitation_sector(spec, e);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sector_hamiltonian(spec, sector));
    const Eigen::Index at = sector.find(state);
    const RealVector weights = eig.eigenvectors().row(at).cwiseAbs2().transpose();
    PopulationTrace trace{state_label(state), state, {}};
    trace.population.reserve(times_ns.size());
    for (double t : times_ns) {
      cplx amp = 0.0;
      for (Eigen::Index j = 0; j < weights.size(); ++j) amp += weights(j) * std::polar(1.0, -eig.eigenvalues()(j) * t);
      trace.population.push_back(std::norm(amp));
    }
    out.push_back(std::move(trace));
  }
  return out;
}

std::complex<double> closed_form_f(double k, double lambda) {
  const double c = std::cos(lambda), s = std::sin(lambda);
  const double c2 = c * c, s2 = s * s;
  const cplx i(0.0, 1.0);
  const cplx bracket = (std::exp(4.0 * i * k) - std::exp(-4.0 * i * k)) - (std::exp(2.0 * i * k) - std::exp(-2.0 * i * k)) - 3.0;
  return std::exp(6.0 * i * k) * c2 * c2 * c2 + s2 * c2 * c2 * bracket - 3.0 * s2 * s2 * c2 - s2 * s2 * s2;
}

ClosedFormResult closed_form_rotation_fidelity(double k, double t, const std::vector<double>& g) {
  ClosedFormResult res;
  const auto bits = computational_bitstrings(static_cast<int>(g.size()));
  const double n = static_cast<double>(bits.size());
  double purity = 0.0;
  cplx overlap = 0.0;
  for (const auto& b : bits) {
    const double lambda = embedded_singular_value(g, b);
    const cplx f = closed_form_f(k, lambda * t);
    res.f.push_back(f);
    purity += std::norm(f);
    // Dark entry f(k, 0) = e^{6ik} matches the target exactly.
    overlap += lambda == 0.0 ? f * std::exp(cplx(0.0, -6.0 * k)) : -f;
  }
  res.fidelity = (std::norm(overlap) + purity) / (n * (n + 1.0));
  return res;
}

double standard_gate_time(double g) { return 0.333 * pi / g; }

}  // namespace qwalk::cqed
