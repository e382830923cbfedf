#pragma once

#include <array>
#include <stdexcept>

#include "qwalk/linalg.hpp"

namespace qwalk::walk {

using Vec3 = std::array<double, 3>;

/// Coin angle, walker momentum and odd half-step count. The walk runs 2N
/// steps with momentum increment 2 pi / N per step.
struct WalkParams {
  double theta = 0.0;
  double k = 0.0;
  int n = 1;

  int total_steps() const { return 2 * n; }
  double delta_k() const;
  void validate() const;
};

/// Quasi-energy and axis of the effective two-band Hamiltonian at one (k, theta).
struct BandPoint {
  double energy = 0.0;  // in (0, pi)
  Vec3 axis{};          // n_{k,theta}, unit norm
  Vec3 chiral_axis{};   // A_theta = (0, cos theta/2, sin theta/2)
};

/// Thrown by band_point where sin E = 0 and the axis is undefined.
class DegeneratePointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct WindingResult {
  int winding = 0;
  bool degenerate = false;
};

Operator coin(double theta);
Operator shift(double k);
/// shift(k) * coin(theta)
Operator single_step(double theta, double k);

Vec3 chiral_axis(double theta);
BandPoint band_point(double k, double theta, double tol = kDefaultTol);

/// Winding of n_{k,theta} around A_theta over a uniform k grid.
WindingResult winding_number(double theta, int grid_size = 256, double tol = 1e-6);

/// S^{steps} W0 ... S^2 W0 S W0 with S = shift(delta_k), W0 = single_step(theta, k).
Operator step_dependent_walk(double theta, double k, int steps, double delta_k);

/// The 2N-step sweep of the Brillouin zone.
Operator walk_sequence(const WalkParams& params);

/// || walk_sequence + I ||
double revival_residual(double theta, int n);

/// Closed form 2 |cos(theta/2)|^N of the revival bound.
double revival_bound(double theta, int n);

/// Effective Hamiltonian E n.sigma of a 2x2 unitary W = exp(-i H).
Operator effective_hamiltonian(const Operator& step);

/// a.sigma for a real 3-vector.
Matrix dot_sigma(const Vec3& a);

}  // namespace qwalk::walk
