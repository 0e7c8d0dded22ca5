// qbhop_main.cpp — command-line driver exposing every experiment: angle
// derivation, rotation-dynamics sweeps, region classification, single
// searches, the perturbation experiment, full hopper runs, and the scaling
// benchmark. All runs are seed-reproducible and echo their resolved config.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbhop/analytics.hpp"
#include "qbhop/hopper.hpp"
#include "qbhop/io.hpp"
#include "qbhop/localsearch.hpp"
#include "qbhop/objective.hpp"
#include "qbhop/simulator.hpp"
#include "qbhop/stats.hpp"

using nlohmann::ordered_json;

namespace {

// ---- shared option bundles -------------------------------------------------

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out;
  std::string format;  // per-subcommand default applied after parsing
  std::string config_path;
};

struct ObjectiveOptions {
  std::string objective = "eggcrate";
  int basins = 8;
  double gap = 0.25;
  double tilt = 0.0;
  int dim = 0;      // 0 = family default
  int grid = 64;    // points per dimension
  double step = 0.0;  // 0 = family default
  std::string method = "gd";
  std::string table;  // CSV path for tabulated objectives
  int descent_steps = 20;
};

struct BuiltProblem {
  qbhop::HopperProblem problem;
  ObjectiveOptions resolved;  // with dim/step defaults filled in
};

int default_dim(const std::string& objective) {
  if (objective == "doublewell") return 1;
  return 2;
}

double default_step(const std::string& objective) {
  if (objective == "bowl") return 0.25;
  if (objective == "eggcrate") return 0.035;
  return 0.05;  // doublewell, tabulated
}

BuiltProblem build_problem(const ObjectiveOptions& opts) {
  ObjectiveOptions r = opts;
  if (r.dim == 0) r.dim = default_dim(r.objective);
  if (r.step == 0.0) r.step = default_step(r.objective);

  qbhop::ObjectiveSpec spec;
  if (r.objective == "bowl") {
    spec = qbhop::quadratic_bowl(r.dim);
  } else if (r.objective == "doublewell") {
    spec = qbhop::double_well(r.dim, r.tilt);
  } else if (r.objective == "eggcrate") {
    spec = qbhop::egg_crate(r.basins, r.dim, r.gap);
  } else if (r.objective == "tabulated") {
    if (r.table.empty())
      throw CLI::ValidationError("objective", "tabulated objective needs --table");
    spec = qbhop::tabulated_from_csv(r.table);
    r.dim = spec.dim;
  } else {
    throw CLI::ValidationError("objective", "unknown objective '" + r.objective + "'");
  }

  qbhop::DescentConfig dcfg;
  dcfg.method = r.method == "cg" ? qbhop::DescentMethod::ConjugateGradient
                                 : qbhop::DescentMethod::GradientDescent;
  dcfg.step = r.step;
  dcfg.steps = r.descent_steps;

  std::vector<std::int64_t> shape(static_cast<std::size_t>(spec.dim), r.grid);
  if (spec.kind == qbhop::ObjectiveKind::Tabulated) shape = spec.table_shape;

  BuiltProblem built;
  built.problem = qbhop::make_problem(spec, shape, dcfg);
  built.resolved = r;

  const double bound = qbhop::lipschitz_bound(spec);
  if (bound > 0.0 && r.step * bound >= 1.0)
    std::cerr << "warning: step size " << qbhop::format_shortest(r.step)
              << " times the curvature bound " << qbhop::format_shortest(bound)
              << " is >= 1; descent may be unstable on this objective\n";
  return built;
}

// ---- output plumbing -------------------------------------------------------

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << content;
}

ordered_json echo_to_json(const qbhop::ConfigEcho& echo) {
  ordered_json j = ordered_json::object();
  for (const auto& [key, value] : echo) j[key] = value;
  return j;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

void append_objective_echo(qbhop::ConfigEcho& echo, const ObjectiveOptions& r) {
  echo.emplace_back("objective", r.objective);
  if (r.objective == "eggcrate") {
    echo.emplace_back("basins", std::to_string(r.basins));
    echo.emplace_back("gap", qbhop::format_shortest(r.gap));
  }
  if (r.objective == "doublewell")
    echo.emplace_back("tilt", qbhop::format_shortest(r.tilt));
  if (r.objective == "tabulated") echo.emplace_back("table", r.table);
  echo.emplace_back("dim", std::to_string(r.dim));
  echo.emplace_back("grid", std::to_string(r.grid));
  echo.emplace_back("step", qbhop::format_shortest(r.step));
  echo.emplace_back("method", r.method);
  echo.emplace_back("L", std::to_string(r.descent_steps));
}

void add_objective_options(CLI::App* sub, ObjectiveOptions& opts,
                           const std::string& default_objective) {
  opts.objective = default_objective;
  sub->add_option("--objective", opts.objective,
                  "objective family: bowl, doublewell, eggcrate, tabulated")
      ->envname("QBHOP_OBJECTIVE");
  sub->add_option("--basins", opts.basins, "egg-crate basin count")
      ->envname("QBHOP_BASINS");
  sub->add_option("--gap", opts.gap, "egg-crate global-basin depth gap");
  sub->add_option("--tilt", opts.tilt, "double-well tilt (0 = symmetric wells)");
  sub->add_option("--dim", opts.dim, "dimension (0 = family default)");
  sub->add_option("--grid", opts.grid, "grid points per dimension");
  sub->add_option("--step", opts.step, "descent step size (0 = family default)");
  sub->add_option("--method", opts.method, "descent method: gd or cg");
  sub->add_option("--table", opts.table, "CSV file for tabulated objectives");
  sub->add_option("--L", opts.descent_steps, "descent steps per local search")
      ->envname("QBHOP_L");
}

void add_common_options(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--seed", opts.seed, "master random seed")->envname("QBHOP_SEED");
  sub->add_option("--out", opts.out, "output file (default: stdout)")
      ->envname("QBHOP_OUT");
  sub->add_option("--format", opts.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json", ""}))
      ->envname("QBHOP_FORMAT");
  sub->add_option("--config", opts.config_path,
                  "read options from a flat 'key = value' file (# comments); "
                  "explicit flags win over file keys");
}

// Expands a flat config file into --key=value tokens. Lines are 'key = value';
// blank lines and lines starting with '#' are skipped, which makes the comment
// header of an emitted CSV directly reusable after stripping the '# ' prefix.
std::string trim_ws(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r");
  return s.substr(from, to - from + 1);
}

std::vector<std::string> config_file_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim_ws(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line without '=': " + stripped);
    const std::string key = trim_ws(stripped.substr(0, eq));
    const std::string value = trim_ws(stripped.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config line without key: " + stripped);
    // Never let a config file redirect output or chain to another config.
    if (key == "config" || key == "out") continue;
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

// Splices config-file tokens in directly after the subcommand name, before
// the user's own flags, so with take-last semantics explicit flags override
// file keys and file keys override defaults.
std::vector<std::string> expand_config_args(const std::vector<std::string>& raw) {
  std::size_t sub_pos = raw.size();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i].empty() && raw[i][0] != '-') {
      sub_pos = i;
      break;
    }
  }
  std::string config_path;
  if (sub_pos < raw.size()) {
    for (std::size_t i = sub_pos + 1; i < raw.size(); ++i) {
      if (raw[i] == "--config" && i + 1 < raw.size())
        config_path = raw[i + 1];
      else if (raw[i].rfind("--config=", 0) == 0)
        config_path = raw[i].substr(std::string("--config=").size());
    }
  }
  if (config_path.empty()) return raw;
  std::vector<std::string> expanded(raw.begin(), raw.begin() + sub_pos + 1);
  for (const std::string& token : config_file_tokens(config_path))
    expanded.push_back(token);
  expanded.insert(expanded.end(), raw.begin() + sub_pos + 1, raw.end());
  return expanded;
}

void common_echo_tail(qbhop::ConfigEcho& echo, const CommonOptions& common) {
  echo.emplace_back("seed", std::to_string(common.seed));
  echo.emplace_back("format", common.format);
}

// ---- subcommand runners ----------------------------------------------------

struct AnglesOptions {
  std::int64_t na = 0, nb = 0, ng = 0;
  CommonOptions common;
};

int run_angles(const AnglesOptions& o) {
  const qbhop::RegionCounts counts{o.na, o.nb, o.ng};
  const qbhop::GroverAngles angles = qbhop::angles_from_counts(counts);

  qbhop::ConfigEcho echo;
  echo.emplace_back("na", std::to_string(o.na));
  echo.emplace_back("nb", std::to_string(o.nb));
  echo.emplace_back("ng", std::to_string(o.ng));
  common_echo_tail(echo, o.common);

  if (o.common.format == "csv") {
    std::string out = qbhop::config_comment_block(echo);
    out += "quantity,value\n";
    const std::pair<const char*, double> rows[] = {
        {"theta", angles.theta}, {"eta", angles.eta},   {"zeta", angles.zeta},
        {"decay", angles.decay}, {"rho", angles.rho},   {"phi", angles.phi},
    };
    for (const auto& [name, value] : rows)
      out += std::string(name) + "," + qbhop::format_sig12(value) + "\n";
    write_output(o.common.out, out);
  } else {
    ordered_json j;
    j["config"] = echo_to_json(echo);
    j["theta"] = angles.theta;
    j["eta"] = angles.eta;
    j["zeta"] = angles.zeta;
    j["decay"] = angles.decay;
    j["rho"] = angles.rho;
    j["phi"] = angles.phi;
    write_output(o.common.out, dump_json(j));
  }
  return 0;
}

struct SweepOptions {
  std::int64_t na = 0, nb = 0, ng = 0;
  int kmax = 20;
  CommonOptions common;
};

int run_sweep(const SweepOptions& o) {
  const qbhop::RegionCounts counts{o.na, o.nb, o.ng};
  qbhop::angles_from_counts(counts);  // regime check up front

  qbhop::ConfigEcho echo;
  echo.emplace_back("na", std::to_string(o.na));
  echo.emplace_back("nb", std::to_string(o.nb));
  echo.emplace_back("ng", std::to_string(o.ng));
  echo.emplace_back("kmax", std::to_string(o.kmax));
  common_echo_tail(echo, o.common);

  struct Row {
    int k;
    std::complex<double> c_rec, c_closed;
    double bound, simplified, success;
  };
  std::vector<Row> rows;
  for (int k = 0; k <= o.kmax; ++k) {
    Row row;
    row.k = k;
    row.c_rec = qbhop::recurrence_state(counts, k).c;
    row.c_closed = qbhop::closed_form_state(counts, k).c;
    row.bound = qbhop::gamma_amplitude_lower_bound(counts, k);
    row.simplified = qbhop::simplified_lower_bound(counts, k);
    row.success = std::norm(row.c_rec);
    rows.push_back(row);
  }

  if (o.common.format == "json") {
    ordered_json j;
    j["config"] = echo_to_json(echo);
    j["rows"] = ordered_json::array();
    for (const Row& r : rows) {
      ordered_json jr;
      jr["n_alpha"] = o.na;
      jr["n_beta"] = o.nb;
      jr["n_gamma"] = o.ng;
      jr["k"] = r.k;
      jr["c_recurrence_re"] = r.c_rec.real();
      jr["c_recurrence_im"] = r.c_rec.imag();
      jr["c_closedform_re"] = r.c_closed.real();
      jr["c_closedform_im"] = r.c_closed.imag();
      jr["bound"] = r.bound;
      jr["simplified_bound"] = r.simplified;
      jr["success_prob"] = r.success;
      j["rows"].push_back(jr);
    }
    write_output(o.common.out, dump_json(j));
  } else {
    std::string out = qbhop::config_comment_block(echo);
    out +=
        "n_alpha,n_beta,n_gamma,k,c_recurrence_re,c_recurrence_im,"
        "c_closedform_re,c_closedform_im,bound,simplified_bound,success_prob\n";
    for (const Row& r : rows) {
      out += std::to_string(o.na) + "," + std::to_string(o.nb) + "," +
             std::to_string(o.ng) + "," + std::to_string(r.k) + "," +
             qbhop::format_sig12(r.c_rec.real()) + "," +
             qbhop::format_sig12(r.c_rec.imag()) + "," +
             qbhop::format_sig12(r.c_closed.real()) + "," +
             qbhop::format_sig12(r.c_closed.imag()) + "," +
             qbhop::format_sig12(r.bound) + "," +
             qbhop::format_sig12(r.simplified) + "," +
             qbhop::format_sig12(r.success) + "\n";
    }
    write_output(o.common.out, out);
  }
  return 0;
}

struct RegionsOptions {
  ObjectiveOptions objective;
  double Y = 0.5;
  double delta = 0.0;
  int err_samples = 32;
  bool full_indices = false;
  CommonOptions common;
};

int run_regions(const RegionsOptions& o) {
  const BuiltProblem built = build_problem(o.objective);
  const qbhop::RegionPartition partition = qbhop::classify_regions(
      built.problem.objective, built.problem.descent, built.problem.grid, o.Y,
      o.delta, o.err_samples, o.common.seed);

  qbhop::ConfigEcho echo;
  append_objective_echo(echo, built.resolved);
  echo.emplace_back("Y", qbhop::format_shortest(o.Y));
  echo.emplace_back("delta", qbhop::format_shortest(o.delta));
  echo.emplace_back("err-samples", std::to_string(o.err_samples));
  echo.emplace_back("full-indices", o.full_indices ? "true" : "false");
  common_echo_tail(echo, o.common);

  if (o.common.format == "csv") {
    std::string out = qbhop::config_comment_block(echo);
    out += "index,region\n";
    std::vector<char> region(built.problem.grid.total_points(), 'a');
    for (const std::int64_t i : partition.beta_indices) region[i] = 'b';
    for (const std::int64_t i : partition.gamma_indices) region[i] = 'g';
    for (std::int64_t i = 0; i < built.problem.grid.total_points(); ++i) {
      const char* name = region[i] == 'a'   ? "alpha"
                         : region[i] == 'b' ? "beta"
                                            : "gamma";
      out += std::to_string(i) + "," + name + "\n";
    }
    write_output(o.common.out, out);
  } else {
    ordered_json j;
    j["config"] = echo_to_json(echo);
    j["n_alpha"] = partition.n_alpha;
    j["n_beta"] = partition.n_beta;
    j["n_gamma"] = partition.n_gamma;
    j["beta_indices"] = partition.beta_indices;
    if (o.full_indices) {
      j["alpha_indices"] = partition.alpha_indices;
      j["gamma_indices"] = partition.gamma_indices;
    }
    write_output(o.common.out, dump_json(j));
  }
  return 0;
}

struct GroverOptions {
  ObjectiveOptions objective;
  double Y = 0.5;
  double delta = 0.0;
  int err_samples = 32;
  bool stochastic = false;
  int rotations = 1;
  int trials = 1000;
  CommonOptions common;
};

int run_grover(const GroverOptions& o) {
  const BuiltProblem built = build_problem(o.objective);
  const qbhop::RegionPartition partition = qbhop::classify_regions(
      built.problem.objective, built.problem.descent, built.problem.grid, o.Y,
      o.delta, o.err_samples, o.common.seed);
  const qbhop::OracleMode mode = o.stochastic
                                     ? qbhop::OracleMode::StochasticPerRun
                                     : qbhop::OracleMode::Deterministic;
  const qbhop::OracleSpec oracle = qbhop::build_oracle(partition, mode);

  qbhop::GbsConfig gcfg;
  gcfg.Y = o.Y;
  gcfg.rotations = o.rotations;
  gcfg.descent_steps = built.resolved.descent_steps;
  gcfg.mode = mode;

  std::map<std::int64_t, std::int64_t> histogram;
  std::int64_t gamma_hits = 0;
  std::vector<char> in_gamma(built.problem.grid.total_points(), 0);
  for (const std::int64_t i : partition.gamma_indices) in_gamma[i] = 1;
  for (int t = 0; t < o.trials; ++t) {
    const qbhop::GbsSample sample = qbhop::run_gbs(
        gcfg, oracle, built.problem.objective, built.problem.descent,
        built.problem.grid,
        qbhop::substream_seed(o.common.seed, "run", static_cast<std::uint64_t>(t)));
    ++histogram[sample.index];
    if (in_gamma[sample.index]) ++gamma_hits;
  }

  // Analytic prediction from the closed-form dynamics, when in regime.
  ordered_json predicted;
  try {
    const qbhop::RegionCounts counts{partition.n_alpha, partition.n_beta,
                                     partition.n_gamma};
    predicted = std::norm(qbhop::recurrence_state(counts, o.rotations).c);
  } catch (const std::exception&) {
    predicted = nullptr;
  }

  qbhop::ConfigEcho echo;
  append_objective_echo(echo, built.resolved);
  echo.emplace_back("Y", qbhop::format_shortest(o.Y));
  echo.emplace_back("delta", qbhop::format_shortest(o.delta));
  echo.emplace_back("err-samples", std::to_string(o.err_samples));
  echo.emplace_back("stochastic", o.stochastic ? "true" : "false");
  echo.emplace_back("r", std::to_string(o.rotations));
  echo.emplace_back("trials", std::to_string(o.trials));
  common_echo_tail(echo, o.common);

  ordered_json j;
  j["config"] = echo_to_json(echo);
  j["n_alpha"] = partition.n_alpha;
  j["n_beta"] = partition.n_beta;
  j["n_gamma"] = partition.n_gamma;
  j["histogram"] = ordered_json::object();
  for (const auto& [index, count] : histogram)
    j["histogram"][std::to_string(index)] = count;
  j["success_frequency"] =
      static_cast<double>(gamma_hits) / static_cast<double>(o.trials);
  j["predicted_success"] = predicted;
  write_output(o.common.out, dump_json(j));
  return 0;
}

struct PerturbOptions {
  ObjectiveOptions objective;
  double Y = 0.5;
  int rotations = 2;
  double eps = 0.001;
  int trials = 100;
  CommonOptions common;
};

int run_perturb(const PerturbOptions& o) {
  const BuiltProblem built = build_problem(o.objective);
  const qbhop::RegionPartition partition = qbhop::classify_regions(
      built.problem.objective, built.problem.descent, built.problem.grid, o.Y,
      0.0, 1, o.common.seed);
  const qbhop::OracleSpec oracle =
      qbhop::build_oracle(partition, qbhop::OracleMode::Deterministic);

  qbhop::GbsConfig gcfg;
  gcfg.Y = o.Y;
  gcfg.rotations = o.rotations;
  gcfg.descent_steps = built.resolved.descent_steps;
  gcfg.mode = qbhop::OracleMode::Deterministic;

  const std::vector<double> norms = qbhop::perturbation_experiment(
      gcfg, oracle, o.eps, o.trials, o.common.seed);
  const double bound =
      (2.0 * o.rotations + 1.0) * built.resolved.descent_steps * o.eps;
  const double max_norm = *std::max_element(norms.begin(), norms.end());

  qbhop::ConfigEcho echo;
  append_objective_echo(echo, built.resolved);
  echo.emplace_back("Y", qbhop::format_shortest(o.Y));
  echo.emplace_back("r", std::to_string(o.rotations));
  echo.emplace_back("eps", qbhop::format_shortest(o.eps));
  echo.emplace_back("trials", std::to_string(o.trials));
  common_echo_tail(echo, o.common);

  if (o.common.format == "csv") {
    std::string out = qbhop::config_comment_block(echo);
    out += "trial,norm_difference\n";
    for (std::size_t t = 0; t < norms.size(); ++t)
      out += std::to_string(t) + "," + qbhop::format_sig12(norms[t]) + "\n";
    write_output(o.common.out, out);
  } else {
    ordered_json j;
    j["config"] = echo_to_json(echo);
    j["bound"] = bound;
    j["max_norm"] = max_norm;
    j["all_below_bound"] = max_norm < bound;
    j["norms"] = norms;
    write_output(o.common.out, dump_json(j));
  }
  return 0;
}

struct HopOptions {
  ObjectiveOptions objective;
  double lambda = 8.0 / 7.0;
  double max_m = 0.0;  // 0 = sqrt(N)
  int trials = 50;
  std::string algorithm = "hopper";
  double prs_threshold = 0.0;
  CommonOptions common;
};

std::string trial_csv_header() {
  return "seed,algorithm,B,N,queries,found_global,final_y,queries_to_global\n";
}

std::string trial_csv_row(const qbhop::BenchTrialRow& row) {
  return std::to_string(row.seed) + "," + row.algorithm + "," +
         std::to_string(row.basins) + "," + std::to_string(row.n_points) + "," +
         std::to_string(row.queries) + "," + (row.found_global ? "1" : "0") +
         "," + qbhop::format_sig12(row.final_y) + "," +
         std::to_string(row.queries_to_global) + "\n";
}

ordered_json trial_json_row(const qbhop::BenchTrialRow& row) {
  ordered_json j;
  j["seed"] = row.seed;
  j["algorithm"] = row.algorithm;
  j["B"] = row.basins;
  j["N"] = row.n_points;
  j["queries"] = row.queries;
  j["found_global"] = row.found_global;
  j["final_y"] = row.final_y;
  j["queries_to_global"] = row.queries_to_global;
  return j;
}

int run_hop(const HopOptions& o) {
  if (o.algorithm != "hopper" && o.algorithm != "multistart" && o.algorithm != "prs")
    throw CLI::ValidationError("algorithm", "must be hopper, multistart, or prs");
  const BuiltProblem built = build_problem(o.objective);
  const std::int64_t n = built.problem.grid.total_points();
  const int basins_column =
      built.resolved.objective == "eggcrate" ? built.resolved.basins : 0;

  std::vector<qbhop::BenchTrialRow> rows;
  std::vector<double> queries, queries_to_global;
  std::int64_t successes = 0;
  for (int t = 0; t < o.trials; ++t) {
    qbhop::HopperConfig cfg;
    cfg.lambda = o.lambda;
    cfg.max_m = o.max_m > 0.0 ? o.max_m : std::sqrt(static_cast<double>(n));
    cfg.descent_steps = built.resolved.descent_steps;
    cfg.seed = qbhop::substream_seed(o.common.seed, "trial",
                                     static_cast<std::uint64_t>(t),
                                     static_cast<std::uint64_t>(basins_column));
    cfg.max_outer_iters = o.algorithm == "hopper" ? 256 : 100000;

    qbhop::RunRecord rec;
    if (o.algorithm == "hopper")
      rec = qbhop::quantum_basin_hop(built.problem, cfg);
    else if (o.algorithm == "multistart")
      rec = qbhop::multistart_baseline(built.problem, cfg);
    else
      rec = qbhop::pure_random_search_baseline(built.problem, cfg, o.prs_threshold);

    qbhop::BenchTrialRow row;
    row.seed = cfg.seed;
    row.algorithm = o.algorithm;
    row.basins = basins_column;
    row.n_points = n;
    row.queries = rec.queries;
    row.found_global = rec.found_global;
    row.final_y = rec.best_trace.back().second;
    row.queries_to_global = rec.queries_to_global;
    rows.push_back(row);
    queries.push_back(static_cast<double>(rec.queries));
    queries_to_global.push_back(static_cast<double>(rec.queries_to_global));
    if (rec.found_global) ++successes;
  }

  qbhop::ConfigEcho echo;
  append_objective_echo(echo, built.resolved);
  echo.emplace_back("algorithm", o.algorithm);
  echo.emplace_back("lambda", qbhop::format_shortest(o.lambda));
  echo.emplace_back("M", qbhop::format_shortest(o.max_m));
  echo.emplace_back("Y", qbhop::format_shortest(o.prs_threshold));
  echo.emplace_back("trials", std::to_string(o.trials));
  common_echo_tail(echo, o.common);

  if (o.common.format == "json") {
    ordered_json j;
    j["config"] = echo_to_json(echo);
    j["rows"] = ordered_json::array();
    for (const auto& row : rows) j["rows"].push_back(trial_json_row(row));
    ordered_json summary;
    summary["median_queries"] = qbhop::median(queries);
    summary["mean_queries"] = qbhop::mean(queries);
    summary["mean_queries_to_global"] = qbhop::mean(queries_to_global);
    summary["success_rate"] =
        static_cast<double>(successes) / static_cast<double>(o.trials);
    j["summary"] = summary;
    write_output(o.common.out, dump_json(j));
  } else {
    std::string out = qbhop::config_comment_block(echo);
    out += trial_csv_header();
    for (const auto& row : rows) out += trial_csv_row(row);
    write_output(o.common.out, out);
  }
  return 0;
}

struct BenchOptions {
  int trials = 200;
  double lambda = 1.5;  // mirrors the benchmark protocol default
  double max_m = 0.0;
  int descent_steps = 20;
  int grid = 64;
  int dim = 2;
  double gap = 0.25;
  double step = 0.035;
  CommonOptions common;
};

int run_bench(const BenchOptions& o) {
  qbhop::BenchProtocol protocol;
  protocol.trials = o.trials;
  protocol.seed = o.common.seed;
  protocol.lambda = o.lambda;
  protocol.max_m = o.max_m;
  protocol.descent_steps = o.descent_steps;
  protocol.grid_points = o.grid;
  protocol.dim = o.dim;
  protocol.gap = o.gap;
  protocol.step = o.step;

  const qbhop::BenchResult result = qbhop::run_bench(protocol);

  qbhop::ConfigEcho echo;
  echo.emplace_back("trials", std::to_string(o.trials));
  echo.emplace_back("lambda", qbhop::format_shortest(o.lambda));
  echo.emplace_back("M", qbhop::format_shortest(o.max_m));
  echo.emplace_back("L", std::to_string(o.descent_steps));
  echo.emplace_back("grid", std::to_string(o.grid));
  echo.emplace_back("dim", std::to_string(o.dim));
  echo.emplace_back("gap", qbhop::format_shortest(o.gap));
  echo.emplace_back("step", qbhop::format_shortest(o.step));
  common_echo_tail(echo, o.common);

  ordered_json summary;
  summary["groups"] = ordered_json::array();
  for (const auto& g : result.groups) {
    ordered_json jg;
    jg["algorithm"] = g.algorithm;
    jg["basins"] = g.basins;
    jg["median_queries"] = g.median_queries;
    jg["mean_queries"] = g.mean_queries;
    jg["mean_queries_to_global"] = g.mean_queries_to_global;
    jg["success_rate"] = g.success_rate;
    summary["groups"].push_back(jg);
  }
  summary["exponents"] = {{"hopper", result.hopper_exponent},
                          {"multistart", result.multistart_exponent}};

  if (o.common.format == "json") {
    ordered_json j;
    j["config"] = echo_to_json(echo);
    j["rows"] = ordered_json::array();
    for (const auto& row : result.rows) j["rows"].push_back(trial_json_row(row));
    j["summary"] = summary;
    write_output(o.common.out, dump_json(j));
  } else {
    if (o.common.out.empty())
      throw CLI::ValidationError("out", "bench csv output needs --out (it also writes <out>.summary.json)");
    std::string out = qbhop::config_comment_block(echo);
    out += trial_csv_header();
    for (const auto& row : result.rows) out += trial_csv_row(row);
    write_output(o.common.out, out);

    ordered_json j;
    j["config"] = echo_to_json(echo);
    j["summary"] = summary;
    write_output(o.common.out + ".summary.json", dump_json(j));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotation-search global optimization experiments"};
  app.require_subcommand(1);
  // Repeated options resolve to their last occurrence; config-file expansion
  // relies on this for its flags-beat-file precedence.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  AnglesOptions angles;
  CLI::App* angles_cmd =
      app.add_subcommand("angles", "derive rotation angles from region counts");
  angles_cmd->add_option("--na", angles.na, "unmarked-region count")
      ->required()
      ->envname("QBHOP_NA");
  angles_cmd->add_option("--nb", angles.nb, "error-dependent-region count")
      ->required()
      ->envname("QBHOP_NB");
  angles_cmd->add_option("--ng", angles.ng, "marked-region count")
      ->required()
      ->envname("QBHOP_NG");
  add_common_options(angles_cmd, angles.common);

  SweepOptions sweep;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "rotation dynamics of one count triple over k = 0..kmax");
  sweep_cmd->add_option("--na", sweep.na, "unmarked-region count")
      ->required()
      ->envname("QBHOP_NA");
  sweep_cmd->add_option("--nb", sweep.nb, "error-dependent-region count")
      ->required()
      ->envname("QBHOP_NB");
  sweep_cmd->add_option("--ng", sweep.ng, "marked-region count")
      ->required()
      ->envname("QBHOP_NG");
  sweep_cmd->add_option("--kmax", sweep.kmax, "largest rotation count")
      ->envname("QBHOP_KMAX");
  add_common_options(sweep_cmd, sweep.common);

  RegionsOptions regions;
  CLI::App* regions_cmd = app.add_subcommand(
      "regions", "classify grid points against a threshold");
  add_objective_options(regions_cmd, regions.objective, "doublewell");
  regions_cmd->add_option("--Y", regions.Y, "ordinate threshold")->envname("QBHOP_Y");
  regions_cmd->add_option("--delta", regions.delta, "gradient-error radius")
      ->envname("QBHOP_DELTA");
  regions_cmd->add_option("--err-samples", regions.err_samples,
                          "error draws per grid point")
      ->envname("QBHOP_ERR_SAMPLES");
  regions_cmd->add_flag("--full-indices", regions.full_indices,
                        "also list alpha and gamma indices in JSON output");
  add_common_options(regions_cmd, regions.common);

  GroverOptions grover;
  CLI::App* grover_cmd = app.add_subcommand(
      "grover", "histogram of measured indices after r rotations");
  add_objective_options(grover_cmd, grover.objective, "doublewell");
  grover_cmd->add_option("--Y", grover.Y, "ordinate threshold")->envname("QBHOP_Y");
  grover_cmd->add_option("--delta", grover.delta, "gradient-error radius")
      ->envname("QBHOP_DELTA");
  grover_cmd->add_option("--err-samples", grover.err_samples,
                         "error draws per grid point")
      ->envname("QBHOP_ERR_SAMPLES");
  grover_cmd->add_flag("--stochastic", grover.stochastic,
                       "re-draw error-dependent markings each run");
  grover_cmd->add_option("--r", grover.rotations, "rotation count")
      ->envname("QBHOP_R");
  grover_cmd->add_option("--trials", grover.trials, "measurement samples")
      ->envname("QBHOP_TRIALS");
  add_common_options(grover_cmd, grover.common);

  PerturbOptions perturb;
  CLI::App* perturb_cmd = app.add_subcommand(
      "perturb", "bounded state-perturbation experiment");
  add_objective_options(perturb_cmd, perturb.objective, "doublewell");
  perturb_cmd->add_option("--Y", perturb.Y, "ordinate threshold")->envname("QBHOP_Y");
  perturb_cmd->add_option("--r", perturb.rotations, "rotation count")
      ->envname("QBHOP_R");
  perturb_cmd->add_option("--eps", perturb.eps, "per-event deviation bound")
      ->envname("QBHOP_EPS");
  perturb_cmd->add_option("--trials", perturb.trials, "perturbed re-simulations")
      ->envname("QBHOP_TRIALS");
  add_common_options(perturb_cmd, perturb.common);

  HopOptions hop;
  CLI::App* hop_cmd =
      app.add_subcommand("hop", "full optimizer trials on one problem");
  add_objective_options(hop_cmd, hop.objective, "eggcrate");
  hop_cmd->add_option("--algorithm", hop.algorithm,
                      "hopper, multistart, or prs");
  hop_cmd->add_option("--lambda", hop.lambda, "rotation-budget growth factor")
      ->envname("QBHOP_LAMBDA");
  hop_cmd->add_option("--M", hop.max_m, "rotation-budget cap (0 = sqrt(N))")
      ->envname("QBHOP_M");
  hop_cmd->add_option("--Y", hop.prs_threshold,
                      "target threshold for the prs algorithm")
      ->envname("QBHOP_Y");
  hop_cmd->add_option("--trials", hop.trials, "independent seeded trials")
      ->envname("QBHOP_TRIALS");
  add_common_options(hop_cmd, hop.common);

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "hopper-vs-multistart scaling over basin counts {2,4,8,16}");
  bench_cmd->add_option("--trials", bench.trials, "trials per basin count")
      ->envname("QBHOP_TRIALS");
  bench_cmd->add_option("--lambda", bench.lambda, "rotation-budget growth factor")
      ->envname("QBHOP_LAMBDA");
  bench_cmd->add_option("--M", bench.max_m, "rotation-budget cap (0 = sqrt(N))")
      ->envname("QBHOP_M");
  bench_cmd->add_option("--L", bench.descent_steps, "descent steps per local search")
      ->envname("QBHOP_L");
  bench_cmd->add_option("--grid", bench.grid, "grid points per dimension");
  bench_cmd->add_option("--dim", bench.dim, "problem dimension");
  bench_cmd->add_option("--gap", bench.gap, "egg-crate depth gap");
  bench_cmd->add_option("--step", bench.step, "descent step size");
  add_common_options(bench_cmd, bench.common);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config_args(args);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  std::vector<const char*> cargv;
  cargv.push_back(argv[0]);
  for (const std::string& s : args) cargv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  // Per-subcommand default output formats.
  auto apply_format_default = [](CommonOptions& common, const char* preferred) {
    if (common.format.empty()) common.format = preferred;
  };
  apply_format_default(angles.common, "json");
  apply_format_default(sweep.common, "csv");
  apply_format_default(regions.common, "json");
  apply_format_default(grover.common, "json");
  apply_format_default(perturb.common, "json");
  apply_format_default(hop.common, "csv");
  apply_format_default(bench.common, "csv");

  try {
    if (app.got_subcommand(angles_cmd)) return run_angles(angles);
    if (app.got_subcommand(sweep_cmd)) return run_sweep(sweep);
    if (app.got_subcommand(regions_cmd)) return run_regions(regions);
    if (app.got_subcommand(grover_cmd)) return run_grover(grover);
    if (app.got_subcommand(perturb_cmd)) return run_perturb(perturb);
    if (app.got_subcommand(hop_cmd)) return run_hop(hop);
    if (app.got_subcommand(bench_cmd)) return run_bench(bench);
  } catch (const qbhop::OutOfRegimeError& e) {
    std::cerr << "out of regime: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
