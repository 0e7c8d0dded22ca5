// analytics.hpp — closed-form three-region rotation dynamics, the derived
// angle set, amplitude lower bounds, and a brute-force recurrence that
// validates all of them.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qbhop {

struct RegionCounts {
  std::int64_t n_alpha = 0;
  std::int64_t n_beta = 0;
  std::int64_t n_gamma = 0;

  std::int64_t n_total() const { return n_alpha + n_beta + n_gamma; }
};

// Raised when counts fall outside the closed-form analysis's validity regime.
class OutOfRegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Derived rotation geometry. theta and zeta lie in [0, pi/2]; eta lies in
// [0, pi] (it exceeds pi/2 when n_gamma > n_alpha). decay is the per-rotation
// amplitude modulus; (rho, phi) is the polar form of
// (eta - i ln decay) / (1 - decay e^{i eta}).
struct GroverAngles {
  double theta = 0.0;
  double eta = 0.0;
  double zeta = 0.0;
  double decay = 0.0;
  double rho = 0.0;
  double phi = 0.0;
};

// Coefficients of the tracked state after k rotations: a on the unmarked
// component, c on the marked component, b[j] on the j-times-rotated image of
// the error-dependent component (b[0] newest, orthonormal family model).
struct SubspaceState {
  std::complex<double> a{0.0, 0.0};
  std::complex<double> c{0.0, 0.0};
  std::vector<std::complex<double>> b;

  double norm() const;
};

// Preconditions: n_alpha > 0, n_gamma > 0, n_beta^2 <= 4 n_alpha n_gamma,
// (n_alpha + n_gamma)^2 > n_beta^2, (n_alpha + n_beta/2)^2 <= N n_alpha.
GroverAngles angles_from_counts(const RegionCounts& counts);

// Applies the one-rotation linear map k times to the uniform initial state.
// Needs no regime assumptions; this is the independent oracle the closed
// form is checked against.
SubspaceState recurrence_state(const RegionCounts& counts, int k);

// Coefficients read directly off the closed-form expansion of the k-times
// rotated state. Requires the angle preconditions and sin(theta) != 0.
SubspaceState closed_form_state(const RegionCounts& counts, int k);

// Lower bound on the marked-component amplitude after k rotations, with the
// interference sum taken in absolute value.
double gamma_amplitude_lower_bound(const RegionCounts& counts, int k);

// Weaker but k-linear variant of the same bound.
double simplified_lower_bound(const RegionCounts& counts, int k);

// Continuous maximizer of the signed lower bound; callers round to an
// integer rotation count. The arctangent branch is chosen to land in
// (0, pi/eta], the first maximization window.
double optimal_rotation_count(const RegionCounts& counts);

}  // namespace qbhop
