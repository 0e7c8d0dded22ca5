// localsearch.cpp — descent paths, termini, and threshold classification.
#include "qbhop/localsearch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbhop {

namespace {

void clamp_to_box(const BoxDomain& box, std::vector<double>& x) {
  for (std::size_t d = 0; d < x.size(); ++d)
    x[d] = std::clamp(x[d], box.lower[d], box.upper[d]);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<std::vector<double>> descend(const ObjectiveSpec& spec,
                                         const DescentConfig& cfg,
                                         const BoxDomain& box,
                                         const std::vector<double>& x0,
                                         const std::vector<std::vector<double>>& errors) {
  if (cfg.steps < 1) throw std::invalid_argument("descend: steps must be >= 1");
  if (static_cast<int>(errors.size()) != cfg.steps)
    throw std::invalid_argument("descend: expected exactly " +
                                std::to_string(cfg.steps) + " error vectors, got " +
                                std::to_string(errors.size()));
  const int p = spec.dim;
  for (const auto& u : errors)
    if (static_cast<int>(u.size()) != p)
      throw std::invalid_argument("descend: error vector dimension mismatch");

  std::vector<std::vector<double>> path;
  path.reserve(cfg.steps + 1);
  std::vector<double> x = x0;
  clamp_to_box(box, x);
  path.push_back(x);

  std::vector<double> dir(p, 0.0);   // conjugate direction state
  double prev_gg = 0.0;

  for (int k = 0; k < cfg.steps; ++k) {
    std::vector<double> g = gradient(spec, x);
    for (int d = 0; d < p; ++d) g[d] += errors[k][d];

    if (cfg.method == DescentMethod::GradientDescent) {
      for (int d = 0; d < p; ++d) x[d] -= cfg.step * g[d];
    } else {
      // Fletcher–Reeves with a restart every `p` steps and a fixed 10-step
      // backtracking line search starting from the configured step size.
      const double gg = dot(g, g);
      if (k % p == 0 || prev_gg == 0.0) {
        for (int d = 0; d < p; ++d) dir[d] = -g[d];
      } else {
        const double beta = gg / prev_gg;
        for (int d = 0; d < p; ++d) dir[d] = -g[d] + beta * dir[d];
      }
      prev_gg = gg;

      const double f0 = evaluate(spec, x);
      const double slope = dot(g, dir);
      double t = cfg.step;
      std::vector<double> trial(p);
      for (int ls = 0; ls < 10; ++ls) {
        for (int d = 0; d < p; ++d) trial[d] = x[d] + t * dir[d];
        clamp_to_box(box, trial);
        if (evaluate(spec, trial) <= f0 + 1e-4 * t * slope) break;
        t *= 0.5;
      }
      for (int d = 0; d < p; ++d) x[d] += t * dir[d];
    }
    clamp_to_box(box, x);
    path.push_back(x);
  }
  return path;
}

std::vector<std::vector<double>> descend(const ObjectiveSpec& spec,
                                         const DescentConfig& cfg,
                                         const BoxDomain& box,
                                         const std::vector<double>& x0) {
  const std::vector<std::vector<double>> zeros(
      cfg.steps, std::vector<double>(spec.dim, 0.0));
  return descend(spec, cfg, box, x0, zeros);
}

std::vector<double> deterministic_terminus(const ObjectiveSpec& spec,
                                           const DescentConfig& cfg,
                                           const DomainGrid& grid, std::int64_t i) {
  return descend(spec, cfg, grid.domain, index_to_point(grid, i)).back();
}

double deterministic_terminus_value(const ObjectiveSpec& spec,
                                    const DescentConfig& cfg,
                                    const DomainGrid& grid, std::int64_t i) {
  return evaluate(spec, deterministic_terminus(spec, cfg, grid, i));
}

std::vector<double> sample_ball(Rng& rng, int dim, double radius) {
  std::vector<double> v(dim);
  double norm2 = 0.0;
  for (int d = 0; d < dim; ++d) {
    v[d] = rng.gaussian();
    norm2 += v[d] * v[d];
  }
  const double norm = std::sqrt(norm2);
  // radius * U^(1/dim) makes the radial density match the uniform ball.
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  const double s = norm > 0.0 ? r / norm : 0.0;
  for (int d = 0; d < dim; ++d) v[d] *= s;
  return v;
}

RegionPartition classify_regions(const ObjectiveSpec& spec, const DescentConfig& cfg,
                                 const DomainGrid& grid, double Y, double delta,
                                 int n_err_samples, std::uint64_t seed) {
  if (delta < 0.0) throw std::invalid_argument("classify_regions: delta must be >= 0");
  if (n_err_samples < 1)
    throw std::invalid_argument("classify_regions: n_err_samples must be >= 1");
  const std::int64_t n = grid.total_points();
  const int p = spec.dim;
  RegionPartition part;

  for (std::int64_t i = 0; i < n; ++i) {
    const double v0 = deterministic_terminus_value(spec, cfg, grid, i);
    bool any_below = v0 < Y;
    bool any_not_below = v0 > Y;
    bool any_equal = v0 == Y;
    int sampled_below = 0;

    if (delta > 0.0) {
      const std::vector<double> x0 = index_to_point(grid, i);
      std::vector<std::vector<double>> errors(cfg.steps);
      for (int s = 0; s < n_err_samples; ++s) {
        Rng rng(substream_seed(seed, "classify", static_cast<std::uint64_t>(i),
                               static_cast<std::uint64_t>(s)));
        for (int k = 0; k < cfg.steps; ++k) errors[k] = sample_ball(rng, p, delta);
        const double v = evaluate(
            spec, descend(spec, cfg, grid.domain, x0, errors).back());
        if (v < Y) {
          any_below = true;
          ++sampled_below;
        } else if (v > Y) {
          any_not_below = true;
        } else {
          any_equal = true;
        }
      }
    }

    if (any_equal || (any_below && any_not_below)) {
      part.beta_indices.push_back(i);
      part.beta_below_fraction.push_back(
          delta > 0.0 ? static_cast<double>(sampled_below) / n_err_samples
                      : (v0 < Y ? 1.0 : 0.0));
      part.beta_zero_error_below.push_back(v0 < Y ? 1 : 0);
    } else if (any_below) {
      part.gamma_indices.push_back(i);
    } else {
      part.alpha_indices.push_back(i);
    }
  }

  part.n_alpha = static_cast<std::int64_t>(part.alpha_indices.size());
  part.n_beta = static_cast<std::int64_t>(part.beta_indices.size());
  part.n_gamma = static_cast<std::int64_t>(part.gamma_indices.size());
  return part;
}

}  // namespace qbhop
