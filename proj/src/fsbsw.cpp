#include "qwalk/fsbsw.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qwalk::fsbsw {

using std::numbers::pi;

double Sequence::duration() const {
  double total = 0.0;
  for (const auto& s : steps) {
    if (!s.is_not) total += s.gate.duration;
  }
  return total;
}

std::vector<ResonantGate> Sequence::resonant_gates() const {
  std::vector<ResonantGate> out;
  for (const auto& s : steps) {
    if (!s.is_not) out.push_back(s.gate);
  }
  return out;
}

namespace {

Step gate(int a, int b, double duration, Transition t) { return Step{false, ResonantGate{a, b, duration, t}, 0}; }
Step not_gate(int q) { return Step{true, {}, q}; }

// Base sequence on qubits (q, q+1, q+2); flips |110>.
std::vector<Step> base_steps(int q) {
  return {gate(q + 1, q + 2, 0.5, Transition::to02), gate(q, q + 1, 1.0, Transition::to02),
          gate(q + 1, q + 2, 1.5, Transition::to02)};
}

std::vector<int> dims_for(int n) { return std::vector<int>(static_cast<std::size_t>(n), 3); }

void apply_rotation(Matrix& u, const ResonantGate& g, int n) {
  const auto dims = dims_for(n);
  const double angle = g.duration * pi;
  const double c = std::cos(angle);
  const cplx s(0.0, -std::sin(angle));
  const Eigen::Index total = u.rows();
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    auto d = digits_of(idx, dims);
    if (d[g.first] != 1 || d[g.second] != 1) continue;
    if (g.transition == Transition::to02) {
      d[g.first] = 0;
      d[g.second] = 2;
    } else {
      d[g.first] = 2;
      d[g.second] = 0;
    }
    const Eigen::Index other = flat_index(d, dims);
    const Matrix a = u.row(idx);
    const Matrix b = u.row(other);
    u.row(idx) = c * a + s * b;
    u.row(other) = s * a + c * b;
  }
}

void apply_not(Matrix& u, int q, int n) {
  const auto dims = dims_for(n);
  for (Eigen::Index idx = 0; idx < u.rows(); ++idx) {
    auto d = digits_of(idx, dims);
    if (d[q] != 0) continue;
    d[q] = 1;
    u.row(idx).swap(u.row(flat_index(d, dims)));
  }
}

}  // namespace

Sequence build_fsbsw_sequence(int n) {
  if (n < 3) throw std::invalid_argument("build_fsbsw_sequence: n must be >= 3");
  if (n > 12) throw std::invalid_argument("build_fsbsw_sequence: n must be <= 12");
  Sequence seq;
  seq.n = 3;
  seq.steps = base_steps(0);
  seq.flipped = {1, 1, 0};
  while (seq.n < n) {
    // Shift every qubit index up by one to make room for the new first qubit.
    for (auto& s : seq.steps) {
      if (s.is_not) {
        ++s.qubit;
      } else {
        ++s.gate.first;
        ++s.gate.second;
      }
    }
    std::vector<Step> inner = std::move(seq.steps);
    std::vector<int> flipped = seq.flipped;
    if (flipped[0] == 0) {
      inner.insert(inner.begin(), not_gate(1));
      inner.push_back(not_gate(1));
      flipped[0] = 1;
    }
    seq.steps.clear();
    seq.steps.push_back(gate(0, 1, 0.5, Transition::to20));
    seq.steps.insert(seq.steps.end(), inner.begin(), inner.end());
    seq.steps.push_back(gate(0, 1, 1.5, Transition::to20));
    seq.flipped.assign(1, 0);
    seq.flipped.insert(seq.flipped.end(), flipped.begin(), flipped.end());
    ++seq.n;
  }
  return seq;
}

Operator simulate_fsbsw(const Sequence& seq, const std::vector<int>& not_conjugate) {
  const int n = seq.n;
  if (n > 7) throw std::invalid_argument("simulate_fsbsw: n must be <= 7 (3^n dense space)");
  for (int q : not_conjugate) {
    if (q < 0 || q >= n) throw std::invalid_argument("simulate_fsbsw: NOT target out of range");
  }
  const auto dims = dims_for(n);
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  Matrix u = Matrix::Identity(total, total);
  for (int q : not_conjugate) apply_not(u, q, n);
  for (const auto& s : seq.steps) {
    if (s.is_not) {
      apply_not(u, s.qubit, n);
    } else {
      apply_rotation(u, s.gate, n);
    }
  }
  for (int q : not_conjugate) apply_not(u, q, n);
  return Operator(std::move(u), dims);
}

Operator simulate_fsbsw(int n, const std::vector<int>& not_conjugate) {
  return simulate_fsbsw(build_fsbsw_sequence(n), not_conjugate);
}

ComputationalSummary summarize(const Operator& u, int n, double tol) {
  ComputationalSummary out;
  const auto dims = dims_for(n);
  std::vector<Eigen::Index> idx;
  for (int v = 0; v < (1 << n); ++v) {
    std::vector<int> bits(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) bits[j] = (v >> (n - 1 - j)) & 1;
    idx.push_back(flat_index(bits, dims));
    out.bitstrings.push_back(std::move(bits));
  }
  out.diagonal_pm_one = true;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) {
      const cplx v = u(idx[r], idx[c]);
      if (r == c) continue;
      out.max_offdiag = std::max(out.max_offdiag, std::abs(v));
    }
    const cplx d = u(idx[r], idx[r]);
    out.diagonal.push_back(d);
    if (std::abs(d + 1.0) < tol) {
      out.minus_one.push_back(out.bitstrings[r]);
    } else if (std::abs(d - 1.0) >= tol) {
      out.diagonal_pm_one = false;
    }
  }
  if (out.max_offdiag >= tol) out.diagonal_pm_one = false;
  return out;
}

std::vector<CostRow> cost_comparison(int n, int walk_n) {
  if (n < 3) throw std::invalid_argument("cost_comparison: n must be >= 3");
  if (walk_n < 1 || walk_n % 2 == 0) throw std::invalid_argument("cost_comparison: walk N must be odd");
  std::vector<CostRow> rows;
  rows.push_back({"this work", n, std::round(2.0 * walk_n * 0.333 * 100.0) / 100.0, 2 * walk_n,
                  "N=" + std::to_string(walk_n) + ", interaction time 2N x 0.333 pi/g"});
  rows.push_back({"FSBSW", n, static_cast<double>(2 * n - 3), 1, "one compensating R_z on each qubit"});
  if (n == 3) rows.push_back({"1,2Q", n, 6.0, std::nullopt, "two-qubit gate count; single-qubit gates not counted"});
  if (n == 4) rows.push_back({"1,2Q", n, 13.0, std::nullopt, "two-qubit gate count; single-qubit gates not counted"});
  return rows;
}

std::string cost_csv(const std::vector<CostRow>& rows) {
  std::ostringstream os;
  os << "method,n,two_qubit_time_cz,single_qubit_count,note\n";
  for (const auto& r : rows) {
    os << '"' << r.method << "\"," << r.n << ',' << std::setprecision(6) << r.two_qubit_time_cz << ',';
    if (r.single_qubit_count) os << *r.single_qubit_count;
    os << ",\"" << r.note << "\"\n";
  }
  return os.str();
}

}  // namespace qwalk::fsbsw
