// hopper.hpp — the classical outer loops: threshold-driven rotation search
// with a growing rotation budget, multistart and pure-random-search
// baselines, and the scaling benchmark harness.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qbhop/localsearch.hpp"
#include "qbhop/objective.hpp"
#include "qbhop/rng.hpp"
#include "qbhop/simulator.hpp"

namespace qbhop {

struct HopperConfig {
  double lambda = 8.0 / 7.0;  // rotation-budget growth factor, > 1
  double max_m = 64.0;        // give-up cap M on the budget, >= 1
  int descent_steps = 20;     // L
  std::uint64_t seed = 0;
  int max_outer_iters = 64;   // safety cap (also the baselines' start/draw budget)
};

// Everything a run needs to know about the problem instance. The descent
// config's step counts are overridden by HopperConfig::descent_steps.
// global_minimizer enables found-global instrumentation; empty disables it.
struct HopperProblem {
  ObjectiveSpec objective;
  DomainGrid grid;
  DescentConfig descent;
  OrdinateEncoding encoding;
  std::vector<double> global_minimizer;
};

// Grid over the family's default box plus its known minimizer.
HopperProblem make_problem(const ObjectiveSpec& spec,
                           std::vector<std::int64_t> points_per_dim,
                           const DescentConfig& descent);

struct RunRecord {
  std::int64_t queries = 0;  // oracle-invocation count charged to the run
  std::vector<std::pair<std::int64_t, double>> best_trace;  // (queries, best y)
  bool found_global = false;
  std::vector<std::pair<std::vector<double>, double>> candidates;  // measured (x, y)
  // Queries already spent when an accepted candidate first landed within one
  // grid cell of the known minimizer; equals `queries` when none ever did.
  std::int64_t queries_to_global = 0;
  int outer_iters = 0;
};

// Uniform draw from {0, ..., ceil(m - 1)}.
int draw_rotation_count(Rng& rng, double m);

// True when x lies within one grid cell of the problem's known minimizer.
bool in_global_cell(const HopperProblem& problem, const std::vector<double>& x);

// One random start and descent fixes the incumbent; then repeatedly run the
// rotation search against the incumbent threshold with r drawn uniformly
// from {0..ceil(m-1)}, growing m by lambda per attempt, accepting strictly
// improving candidates (register-quantized comparison) and giving up an
// attempt round when m exceeds max_m. Ends when a full round fails to
// improve. Each search charges (2r+1)L + L queries; the initial descent
// charges L.
RunRecord quantum_basin_hop(const HopperProblem& problem, const HopperConfig& cfg);

// Repeated {uniform random start, L-step descent}, L queries per start,
// stopping at the first terminus inside the global cell or after
// max_outer_iters starts.
RunRecord multistart_baseline(const HopperProblem& problem, const HopperConfig& cfg);

// Uniform grid sampling at one query per draw, stopping on a draw whose own
// value is below Y and whose error-free terminus lies in the global cell.
RunRecord pure_random_search_baseline(const HopperProblem& problem,
                                      const HopperConfig& cfg, double Y);

// ---- scaling benchmark -----------------------------------------------------

struct BenchProtocol {
  std::vector<int> basin_counts = {2, 4, 8, 16};
  int trials = 200;
  std::uint64_t seed = 20260822;
  double lambda = 1.5;  // benchmark growth factor (single runs default to 8/7)
  double max_m = 0.0;     // 0 means sqrt(N) per problem
  int descent_steps = 20;
  int grid_points = 64;   // per dimension
  int dim = 2;
  double gap = 0.25;
  double step = 0.035;    // descent step size h
};

struct BenchTrialRow {
  std::uint64_t seed = 0;
  std::string algorithm;
  int basins = 0;
  std::int64_t n_points = 0;
  std::int64_t queries = 0;
  bool found_global = false;
  double final_y = 0.0;
  std::int64_t queries_to_global = 0;
};

struct BenchGroupSummary {
  std::string algorithm;
  int basins = 0;
  double median_queries = 0.0;
  double mean_queries = 0.0;
  double mean_queries_to_global = 0.0;
  double success_rate = 0.0;
};

struct BenchResult {
  std::vector<BenchTrialRow> rows;
  std::vector<BenchGroupSummary> groups;
  // Least-squares slope of log(mean queries-to-global) against log(basins).
  double hopper_exponent = 0.0;
  double multistart_exponent = 0.0;
};

// Runs the egg-crate scaling comparison: `trials` runs of the quantum hopper
// and of multistart, per basin count. Per-trial seeds are substreams of the
// protocol seed, so results are independent of execution order.
BenchResult run_bench(const BenchProtocol& protocol);

}  // namespace qbhop
