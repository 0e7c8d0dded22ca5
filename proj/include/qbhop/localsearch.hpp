// localsearch.hpp — L-step descent with injected gradient errors, and
// classification of grid points against an ordinate threshold.
#pragma once

#include <cstdint>
#include <vector>

#include "qbhop/objective.hpp"
#include "qbhop/rng.hpp"

namespace qbhop {

enum class DescentMethod { GradientDescent, ConjugateGradient };

struct DescentConfig {
  DescentMethod method = DescentMethod::GradientDescent;
  double step = 0.05;  // step size h
  int steps = 20;      // iteration count L
};

// Runs L descent steps from x0 and returns the whole path x_0 ... x_L.
// `errors` must hold exactly cfg.steps vectors; errors[k] is added to the
// gradient used for step k+1. Iterates are clamped to the box coordinatewise.
// With all-zero errors the path is a pure function of x0.
std::vector<std::vector<double>> descend(const ObjectiveSpec& spec,
                                         const DescentConfig& cfg,
                                         const BoxDomain& box,
                                         const std::vector<double>& x0,
                                         const std::vector<std::vector<double>>& errors);

// Error-free descent.
std::vector<std::vector<double>> descend(const ObjectiveSpec& spec,
                                         const DescentConfig& cfg,
                                         const BoxDomain& box,
                                         const std::vector<double>& x0);

// Endpoint of the error-free descent started from grid point i.
std::vector<double> deterministic_terminus(const ObjectiveSpec& spec,
                                           const DescentConfig& cfg,
                                           const DomainGrid& grid, std::int64_t i);

// Objective value at that endpoint.
double deterministic_terminus_value(const ObjectiveSpec& spec,
                                    const DescentConfig& cfg,
                                    const DomainGrid& grid, std::int64_t i);

// Gradient-estimate error model: errors of norm <= small_radius are "small";
// large_amplitude is the amplitude weight of the rare large-error branch used
// by the state perturbation experiment.
struct ErrorModel {
  double small_radius = 0.0;     // delta
  double large_amplitude = 0.0;  // epsilon, in [0, 1)
  std::uint64_t rng_seed = 0;
};

// Disjoint exhaustive split of the grid indices by descent outcome against Y:
// alpha never finishes below Y, gamma always does, beta is error-dependent
// (or sits exactly on the threshold).
struct RegionPartition {
  std::vector<std::int64_t> alpha_indices;
  std::vector<std::int64_t> beta_indices;
  std::vector<std::int64_t> gamma_indices;
  std::int64_t n_alpha = 0;
  std::int64_t n_beta = 0;
  std::int64_t n_gamma = 0;
  // Aligned with beta_indices: the fraction of sampled error draws whose
  // terminal value fell below Y, and whether the zero-error run did.
  std::vector<double> beta_below_fraction;
  std::vector<char> beta_zero_error_below;
};

// For every grid point, runs one error-free descent plus n_err_samples
// descents with per-step errors drawn uniformly from the closed ball of
// radius delta. All terminal values >= Y (strictly above, with none equal)
// puts the point in alpha; all < Y puts it in gamma; mixed outcomes or an
// exact tie with Y put it in beta. delta = 0 short-circuits to the single
// deterministic descent. Per-point seeded substreams make the result
// independent of evaluation order.
RegionPartition classify_regions(const ObjectiveSpec& spec, const DescentConfig& cfg,
                                 const DomainGrid& grid, double Y, double delta,
                                 int n_err_samples, std::uint64_t seed);

// Uniform draw from the closed L2 ball of the given radius.
std::vector<double> sample_ball(Rng& rng, int dim, double radius);

}  // namespace qbhop
