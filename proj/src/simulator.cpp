// simulator.cpp — statevector rotations, oracle realization, measurement,
// and the bounded-perturbation experiment.
#include "qbhop/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbhop {

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& amp : amplitudes) s += std::norm(amp);
  return std::sqrt(s);
}

StateVector uniform_state(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("uniform_state: need n >= 1");
  StateVector st;
  st.amplitudes.assign(n, std::complex<double>(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  return st;
}

OracleSpec build_oracle(const RegionPartition& partition, OracleMode mode) {
  OracleSpec oracle;
  oracle.n_points = partition.n_alpha + partition.n_beta + partition.n_gamma;
  oracle.marked = partition.gamma_indices;
  if (mode == OracleMode::Deterministic) {
    for (std::size_t j = 0; j < partition.beta_indices.size(); ++j)
      if (partition.beta_zero_error_below[j])
        oracle.marked.push_back(partition.beta_indices[j]);
    std::sort(oracle.marked.begin(), oracle.marked.end());
  } else {
    oracle.flaky = partition.beta_indices;
    oracle.flaky_q = partition.beta_below_fraction;
  }
  return oracle;
}

void phase_flip(StateVector& state, const std::vector<std::int64_t>& indices) {
  for (const std::int64_t i : indices) state.amplitudes[i] = -state.amplitudes[i];
}

void diffusion(StateVector& state) {
  std::complex<double> mean(0.0, 0.0);
  for (const auto& amp : state.amplitudes) mean += amp;
  mean /= static_cast<double>(state.amplitudes.size());
  for (auto& amp : state.amplitudes) amp = 2.0 * mean - amp;
}

std::vector<std::int64_t> realize_marking(const OracleSpec& oracle, Rng& rng) {
  std::vector<std::int64_t> marked = oracle.marked;
  for (std::size_t j = 0; j < oracle.flaky.size(); ++j)
    if (rng.uniform() < oracle.flaky_q[j]) marked.push_back(oracle.flaky[j]);
  std::sort(marked.begin(), marked.end());
  return marked;
}

StateVector grover_iteration(StateVector state, const std::vector<std::int64_t>& marked) {
  phase_flip(state, marked);
  diffusion(state);
  return state;
}

StateVector grover_iteration(StateVector state, const OracleSpec& oracle) {
  if (!oracle.flaky.empty())
    throw std::invalid_argument(
        "grover_iteration: oracle has flaky points; draw a marking with "
        "realize_marking first");
  return grover_iteration(std::move(state), oracle.marked);
}

namespace {

std::int64_t sample_index(const StateVector& state, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  const std::int64_t n = static_cast<std::int64_t>(state.amplitudes.size());
  for (std::int64_t i = 0; i < n; ++i) {
    acc += std::norm(state.amplitudes[i]);
    if (u < acc) return i;
  }
  return n - 1;  // guard against accumulated rounding in the CDF
}

}  // namespace

GbsSample run_gbs(const GbsConfig& cfg, const OracleSpec& oracle,
                  const ObjectiveSpec& spec, const DescentConfig& dcfg,
                  const DomainGrid& grid, std::uint64_t seed) {
  if (cfg.rotations < 0) throw std::invalid_argument("run_gbs: rotations must be >= 0");
  Rng rng(substream_seed(seed, "gbs"));
  const std::vector<std::int64_t> marked =
      cfg.mode == OracleMode::StochasticPerRun ? realize_marking(oracle, rng)
                                               : oracle.marked;
  if (cfg.mode == OracleMode::Deterministic && !oracle.flaky.empty())
    throw std::invalid_argument(
        "run_gbs: deterministic mode needs an oracle without flaky points");

  StateVector state = uniform_state(oracle.n_points);
  for (int it = 0; it < cfg.rotations; ++it) {
    phase_flip(state, marked);
    diffusion(state);
  }

  GbsSample sample;
  sample.index = sample_index(state, rng);
  DescentConfig run_cfg = dcfg;
  run_cfg.steps = cfg.descent_steps;
  sample.terminus = deterministic_terminus(spec, run_cfg, grid, sample.index);
  sample.ordinate = evaluate(spec, sample.terminus);
  return sample;
}

namespace {

// Moves the state a distance of exactly `a` (a <= 1) along a random direction
// orthogonal to it; the result stays exactly normalized.
void deviate(StateVector& state, double a, Rng& rng) {
  const std::int64_t n = static_cast<std::int64_t>(state.amplitudes.size());
  std::vector<std::complex<double>> w(n);
  for (std::int64_t i = 0; i < n; ++i)
    w[i] = std::complex<double>(rng.gaussian(), rng.gaussian());
  // Project out the component along the state, then normalize.
  std::complex<double> overlap(0.0, 0.0);
  for (std::int64_t i = 0; i < n; ++i)
    overlap += std::conj(state.amplitudes[i]) * w[i];
  double norm2 = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    w[i] -= overlap * state.amplitudes[i];
    norm2 += std::norm(w[i]);
  }
  if (norm2 == 0.0) return;  // astronomically unlikely
  const double inv = 1.0 / std::sqrt(norm2);
  const double keep = 1.0 - 0.5 * a * a;
  const double mix = a * std::sqrt(1.0 - 0.25 * a * a) * inv;
  for (std::int64_t i = 0; i < n; ++i)
    state.amplitudes[i] = keep * state.amplitudes[i] + mix * w[i];
}

}  // namespace

std::vector<double> perturbation_experiment(const GbsConfig& cfg,
                                            const OracleSpec& oracle, double eps,
                                            int trials, std::uint64_t seed) {
  if (eps < 0.0 || eps >= 1.0)
    throw std::invalid_argument("perturbation_experiment: need 0 <= eps < 1");
  if (trials < 1)
    throw std::invalid_argument("perturbation_experiment: trials must be >= 1");
  if (!oracle.flaky.empty())
    throw std::invalid_argument(
        "perturbation_experiment: use a deterministic oracle (no flaky points)");

  const std::int64_t n = oracle.n_points;
  const int L = cfg.descent_steps;

  // Nominal final state: r rotations then the final oracle-evaluation pass
  // (which alone contributes no state change beyond its L events).
  StateVector nominal = uniform_state(n);
  for (int it = 0; it < cfg.rotations; ++it) {
    phase_flip(nominal, oracle.marked);
    diffusion(nominal);
  }

  std::vector<double> distances;
  distances.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    Rng rng(substream_seed(seed, "perturb", static_cast<std::uint64_t>(t)));
    StateVector perturbed = uniform_state(n);
    // Each rotation performs L evaluation events, the marking flip, L
    // uncomputation events, and the reflection; the final evaluation adds L
    // more events, totalling (2r+1)L deviation opportunities.
    for (int it = 0; it < cfg.rotations; ++it) {
      for (int e = 0; e < L; ++e) deviate(perturbed, rng.uniform(0.0, eps), rng);
      phase_flip(perturbed, oracle.marked);
      for (int e = 0; e < L; ++e) deviate(perturbed, rng.uniform(0.0, eps), rng);
      diffusion(perturbed);
    }
    for (int e = 0; e < L; ++e) deviate(perturbed, rng.uniform(0.0, eps), rng);

    double dist2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
      dist2 += std::norm(perturbed.amplitudes[i] - nominal.amplitudes[i]);
    distances.push_back(std::sqrt(dist2));
  }
  return distances;
}

}  // namespace qbhop
