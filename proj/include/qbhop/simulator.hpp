// simulator.hpp — exact statevector simulation of the threshold-marked
// rotation search on the start register, plus the state-perturbation
// experiment for bounded oracle errors.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qbhop/localsearch.hpp"
#include "qbhop/objective.hpp"
#include "qbhop/rng.hpp"

namespace qbhop {

struct StateVector {
  std::vector<std::complex<double>> amplitudes;

  double norm() const;
};

// Equal-amplitude state over n basis indices.
StateVector uniform_state(std::int64_t n);

enum class OracleMode { Deterministic, StochasticPerRun };

// Which indices the marking oracle flips. `marked` always flip; `flaky`
// indices flip with their per-point probability q, resampled once per run.
// The two sets are disjoint.
struct OracleSpec {
  std::int64_t n_points = 0;
  std::vector<std::int64_t> marked;
  std::vector<std::int64_t> flaky;
  std::vector<double> flaky_q;  // aligned with flaky
};

// Deterministic mode folds every error-dependent point into marked/unmarked
// by its error-free terminus; stochastic mode keeps them flaky with q taken
// from the classifier's sample fraction.
OracleSpec build_oracle(const RegionPartition& partition, OracleMode mode);

// Sign-flips the amplitudes at `indices` in place.
void phase_flip(StateVector& state, const std::vector<std::int64_t>& indices);

// Reflects about the uniform state (2|s><s| - I) in place.
void diffusion(StateVector& state);

// marked plus a fresh Bernoulli draw of each flaky index.
std::vector<std::int64_t> realize_marking(const OracleSpec& oracle, Rng& rng);

// One rotation: flip the given marked set, then reflect about uniform.
StateVector grover_iteration(StateVector state, const std::vector<std::int64_t>& marked);
// Same, reading the marked set from a deterministic-mode oracle (flaky must
// be empty; use realize_marking for stochastic runs).
StateVector grover_iteration(StateVector state, const OracleSpec& oracle);

struct GbsConfig {
  double Y = 0.0;
  int rotations = 0;      // r
  int descent_steps = 1;  // L
  OracleMode mode = OracleMode::Deterministic;
};

struct GbsSample {
  std::int64_t index = 0;        // measured start-register index
  std::vector<double> terminus;  // error-free descent endpoint of that index
  double ordinate = 0.0;         // objective value at the terminus
};

// Applies `rotations` rotations to the uniform state (stochastic mode first
// draws the run's marking), measures an index with probability |amplitude|^2,
// and reports the index's descent terminus and its value. Reproducible for a
// fixed seed.
GbsSample run_gbs(const GbsConfig& cfg, const OracleSpec& oracle,
                  const ObjectiveSpec& spec, const DescentConfig& dcfg,
                  const DomainGrid& grid, std::uint64_t seed);

// For each trial, simulates the pre-measurement state nominally and once
// more with every one of the (2r+1)L oracle-evaluation events followed by a
// random state deviation of norm at most eps (norm preserved exactly).
// Returns the per-trial final-state distances, each provably < (2r+1)L eps.
std::vector<double> perturbation_experiment(const GbsConfig& cfg,
                                            const OracleSpec& oracle, double eps,
                                            int trials, std::uint64_t seed);

}  // namespace qbhop
