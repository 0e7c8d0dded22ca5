// hopper.cpp — outer search loops, baselines, and the scaling benchmark.
#include "qbhop/hopper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qbhop/stats.hpp"

namespace qbhop {

HopperProblem make_problem(const ObjectiveSpec& spec,
                           std::vector<std::int64_t> points_per_dim,
                           const DescentConfig& descent) {
  HopperProblem pb;
  pb.objective = spec;
  pb.grid = make_grid(default_box(spec), std::move(points_per_dim));
  pb.descent = descent;
  pb.global_minimizer = known_minimizer(spec);
  return pb;
}

int draw_rotation_count(Rng& rng, double m) {
  const double hi = std::ceil(m - 1.0);
  const std::int64_t top = hi > 0.0 ? static_cast<std::int64_t>(hi) : 0;
  return static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(top) + 1));
}

bool in_global_cell(const HopperProblem& problem, const std::vector<double>& x) {
  if (problem.global_minimizer.empty()) return false;
  for (int d = 0; d < problem.grid.dim(); ++d)
    if (std::abs(x[d] - problem.global_minimizer[d]) > problem.grid.spacing(d))
      return false;
  return true;
}

namespace {

void check_config(const HopperConfig& cfg) {
  if (cfg.lambda <= 1.0)
    throw std::invalid_argument("hopper: lambda must be > 1");
  if (cfg.max_m < 1.0)
    throw std::invalid_argument("hopper: max_m must be >= 1");
  if (cfg.descent_steps < 1)
    throw std::invalid_argument("hopper: descent_steps must be >= 1");
}

}  // namespace

RunRecord quantum_basin_hop(const HopperProblem& problem, const HopperConfig& cfg) {
  check_config(cfg);
  DescentConfig dcfg = problem.descent;
  dcfg.steps = cfg.descent_steps;
  const std::int64_t n = problem.grid.total_points();
  const double quantum = problem.encoding.scale;
  Rng rng(substream_seed(cfg.seed, "hopper"));

  RunRecord rec;
  bool global_hit = false;

  // Initial incumbent: one uniform random start, one full descent. The
  // incumbent ordinate is the descended point's value, register-quantized.
  const std::int64_t start =
      static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(n)));
  std::vector<double> x_cand =
      descend(problem.objective, dcfg, problem.grid.domain,
              index_to_point(problem.grid, start))
          .back();
  double y_raw = evaluate(problem.objective, x_cand);
  rec.queries = dcfg.steps;
  double y_best = problem.encoding.decode(problem.encoding.encode(y_raw));
  rec.candidates.push_back({x_cand, y_raw});
  rec.best_trace.push_back({rec.queries, y_best});
  if (in_global_cell(problem, x_cand)) {
    global_hit = true;
    rec.queries_to_global = rec.queries;
  }

  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    rec.outer_iters = outer + 1;
    const double Y = y_best;
    // Strictly-below-threshold marking at register resolution: a terminus is
    // marked exactly when its encoded ordinate is below the encoded Y.
    const double threshold = Y - 0.5 * quantum;
    const RegionPartition partition = classify_regions(
        problem.objective, dcfg, problem.grid, threshold, 0.0, 1, 0);
    const OracleSpec oracle = build_oracle(partition, OracleMode::Deterministic);

    double m = 1.0;
    bool improved = false;
    for (;;) {
      const int r = draw_rotation_count(rng, m);
      GbsConfig gcfg;
      gcfg.Y = threshold;
      gcfg.rotations = r;
      gcfg.descent_steps = dcfg.steps;
      gcfg.mode = OracleMode::Deterministic;
      const GbsSample sample =
          run_gbs(gcfg, oracle, problem.objective, dcfg, problem.grid, rng.next_u64());
      rec.queries += static_cast<std::int64_t>(2 * r + 1) * dcfg.steps + dcfg.steps;
      rec.candidates.push_back({sample.terminus, sample.ordinate});
      const double y_cand =
          problem.encoding.decode(problem.encoding.encode(sample.ordinate));
      m *= cfg.lambda;
      if (y_cand < Y) {
        x_cand = sample.terminus;
        y_best = y_cand;
        improved = true;
        rec.best_trace.push_back({rec.queries, y_best});
        if (!global_hit && in_global_cell(problem, x_cand)) {
          global_hit = true;
          rec.queries_to_global = rec.queries;
        }
        break;
      }
      if (m > cfg.max_m) break;
    }
    if (!improved) break;
  }

  rec.found_global = in_global_cell(problem, x_cand);
  if (!global_hit) rec.queries_to_global = rec.queries;
  return rec;
}

RunRecord multistart_baseline(const HopperProblem& problem, const HopperConfig& cfg) {
  check_config(cfg);
  DescentConfig dcfg = problem.descent;
  dcfg.steps = cfg.descent_steps;
  const std::int64_t n = problem.grid.total_points();
  Rng rng(substream_seed(cfg.seed, "multistart"));

  RunRecord rec;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < cfg.max_outer_iters; ++s) {
    rec.outer_iters = s + 1;
    const std::int64_t i =
        static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const std::vector<double> terminus =
        deterministic_terminus(problem.objective, dcfg, problem.grid, i);
    const double y = evaluate(problem.objective, terminus);
    rec.queries += dcfg.steps;
    rec.candidates.push_back({terminus, y});
    if (y < best) {
      best = y;
      rec.best_trace.push_back({rec.queries, best});
    }
    if (in_global_cell(problem, terminus)) {
      rec.found_global = true;
      rec.queries_to_global = rec.queries;
      break;
    }
  }
  if (!rec.found_global) rec.queries_to_global = rec.queries;
  return rec;
}

RunRecord pure_random_search_baseline(const HopperProblem& problem,
                                      const HopperConfig& cfg, double Y) {
  check_config(cfg);
  DescentConfig dcfg = problem.descent;
  dcfg.steps = cfg.descent_steps;
  const std::int64_t n = problem.grid.total_points();
  Rng rng(substream_seed(cfg.seed, "prs"));

  RunRecord rec;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < cfg.max_outer_iters; ++s) {
    rec.outer_iters = s + 1;
    const std::int64_t i =
        static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const std::vector<double> x = index_to_point(problem.grid, i);
    const double y = evaluate(problem.objective, x);
    rec.queries += 1;
    rec.candidates.push_back({x, y});
    if (y < best) {
      best = y;
      rec.best_trace.push_back({rec.queries, best});
    }
    if (y < Y &&
        in_global_cell(problem,
                       deterministic_terminus(problem.objective, dcfg, problem.grid, i))) {
      rec.found_global = true;
      rec.queries_to_global = rec.queries;
      break;
    }
  }
  if (!rec.found_global) rec.queries_to_global = rec.queries;
  return rec;
}

BenchResult run_bench(const BenchProtocol& protocol) {
  BenchResult result;
  std::vector<double> log_b;
  std::vector<double> hopper_log_q, multistart_log_q;

  for (const int basins : protocol.basin_counts) {
    DescentConfig dcfg;
    dcfg.method = DescentMethod::GradientDescent;
    dcfg.step = protocol.step;
    dcfg.steps = protocol.descent_steps;
    const HopperProblem problem = make_problem(
        egg_crate(basins, protocol.dim, protocol.gap),
        std::vector<std::int64_t>(protocol.dim, protocol.grid_points), dcfg);
    const std::int64_t n = problem.grid.total_points();

    for (const char* algorithm : {"hopper", "multistart"}) {
      const bool is_hopper = std::string(algorithm) == "hopper";
      std::vector<double> queries, queries_to_global;
      std::int64_t successes = 0;

      for (int t = 0; t < protocol.trials; ++t) {
        HopperConfig cfg;
        cfg.lambda = protocol.lambda;
        cfg.max_m = protocol.max_m > 0.0
                        ? protocol.max_m
                        : std::sqrt(static_cast<double>(n));
        cfg.descent_steps = protocol.descent_steps;
        cfg.seed = substream_seed(protocol.seed, "trial", static_cast<std::uint64_t>(t),
                                  static_cast<std::uint64_t>(basins));
        cfg.max_outer_iters = is_hopper ? 256 : 100000;

        const RunRecord rec = is_hopper ? quantum_basin_hop(problem, cfg)
                                        : multistart_baseline(problem, cfg);

        BenchTrialRow row;
        row.seed = cfg.seed;
        row.algorithm = algorithm;
        row.basins = basins;
        row.n_points = n;
        row.queries = rec.queries;
        row.found_global = rec.found_global;
        row.final_y = rec.best_trace.back().second;
        row.queries_to_global = rec.queries_to_global;
        result.rows.push_back(row);

        queries.push_back(static_cast<double>(rec.queries));
        queries_to_global.push_back(static_cast<double>(rec.queries_to_global));
        if (rec.found_global) ++successes;
      }

      BenchGroupSummary group;
      group.algorithm = algorithm;
      group.basins = basins;
      group.median_queries = median(queries);
      group.mean_queries = mean(queries);
      group.mean_queries_to_global = mean(queries_to_global);
      group.success_rate = static_cast<double>(successes) / protocol.trials;
      result.groups.push_back(group);

      if (is_hopper)
        hopper_log_q.push_back(std::log(group.mean_queries_to_global));
      else
        multistart_log_q.push_back(std::log(group.mean_queries_to_global));
    }
    log_b.push_back(std::log(static_cast<double>(basins)));
  }

  result.hopper_exponent = least_squares(log_b, hopper_log_q).slope;
  result.multistart_exponent = least_squares(log_b, multistart_log_q).slope;
  return result;
}

}  // namespace qbhop
