// test_localsearch.cpp — descent paths, error injection, and threshold
// classification of grid points.
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "qbhop/localsearch.hpp"
#include "qbhop/objective.hpp"
#include "qbhop/rng.hpp"

using namespace qbhop;

TEST_CASE("gradient descent on the bowl halves the coordinate each step") {
  const ObjectiveSpec bowl = quadratic_bowl(1);
  DescentConfig cfg;
  cfg.step = 0.25;
  cfg.steps = 3;
  const auto path = descend(bowl, cfg, default_box(bowl), {1.0});
  REQUIRE(path.size() == 4);
  CHECK(path[0][0] == doctest::Approx(1.0));
  CHECK(path[1][0] == doctest::Approx(0.5));
  CHECK(path[2][0] == doctest::Approx(0.25));
  CHECK(path[3][0] == doctest::Approx(0.125));
}

TEST_CASE("injected gradient errors shift the step exactly") {
  const ObjectiveSpec bowl = quadratic_bowl(1);
  DescentConfig cfg;
  cfg.step = 0.25;
  cfg.steps = 1;
  // x1 = x0 - h (f'(x0) + u) = 1 - 0.25 (2 + 0.1) = 0.475.
  const auto path = descend(bowl, cfg, default_box(bowl), {1.0}, {{0.1}});
  CHECK(path[1][0] == doctest::Approx(0.475));
}

TEST_CASE("descend validates the error list strictly") {
  const ObjectiveSpec bowl = quadratic_bowl(2);
  DescentConfig cfg;
  cfg.steps = 3;
  const BoxDomain box = default_box(bowl);
  CHECK_THROWS_AS(descend(bowl, cfg, box, {0.5, 0.5}, {{0.0, 0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      descend(bowl, cfg, box, {0.5, 0.5}, {{0.0, 0.0}, {0.0, 0.0}, {0.0}}),
      std::invalid_argument);
  DescentConfig bad;
  bad.steps = 0;
  CHECK_THROWS_AS(descend(bowl, bad, box, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("iterates stay clamped to the box") {
  const ObjectiveSpec bowl = quadratic_bowl(1);
  DescentConfig cfg;
  cfg.step = 2.0;  // overshooting step flings iterates past the boundary
  cfg.steps = 8;
  const auto path = descend(bowl, cfg, default_box(bowl), {1.0});
  for (const auto& x : path) {
    REQUIRE(x[0] >= -1.0);
    REQUIRE(x[0] <= 1.0);
  }
}

TEST_CASE("double-well descent settles into the nearest well") {
  const ObjectiveSpec well = double_well(1);
  DescentConfig cfg;
  cfg.step = 0.05;
  cfg.steps = 30;
  const auto path = descend(well, cfg, default_box(well), {0.6});
  CHECK(std::abs(path.back()[0] - 1.0) < 1e-3);
  const auto path2 = descend(well, cfg, default_box(well), {-0.6});
  CHECK(std::abs(path2.back()[0] + 1.0) < 1e-3);
  // The ridge point itself has zero gradient and never moves.
  const auto stuck = descend(well, cfg, default_box(well), {0.0});
  CHECK(stuck.back()[0] == 0.0);
  CHECK(evaluate(well, stuck.back()) == doctest::Approx(1.0));
}

TEST_CASE("conjugate gradient matches gradient descent's basin on the bowl") {
  const ObjectiveSpec bowl = quadratic_bowl(2);
  DescentConfig cfg;
  cfg.method = DescentMethod::ConjugateGradient;
  cfg.step = 0.25;
  cfg.steps = 20;
  const auto path = descend(bowl, cfg, default_box(bowl), {0.9, -0.7});
  CHECK(std::abs(path.back()[0]) < 1e-3);
  CHECK(std::abs(path.back()[1]) < 1e-3);
  // The line search never accepts an uphill move.
  double prev = evaluate(bowl, path.front());
  for (const auto& x : path) {
    const double v = evaluate(bowl, x);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("terminus helpers agree with descend") {
  const ObjectiveSpec well = double_well(1);
  DescentConfig cfg;
  cfg.step = 0.05;
  cfg.steps = 20;
  const DomainGrid grid = make_grid(default_box(well), {64});
  const auto direct =
      descend(well, cfg, grid.domain, index_to_point(grid, 40)).back();
  const auto terminus = deterministic_terminus(well, cfg, grid, 40);
  CHECK(terminus == direct);
  CHECK(deterministic_terminus_value(well, cfg, grid, 40) ==
        doctest::Approx(evaluate(well, terminus)));
}

TEST_CASE("classification splits the symmetric double-well grid as expected") {
  const ObjectiveSpec well = double_well(1);
  DescentConfig cfg;
  cfg.step = 0.05;
  cfg.steps = 20;

  // 64 points over [-2, 2]: the ridge x = 0 is not a lattice site, so every
  // start descends below 0.5.
  const DomainGrid grid64 = make_grid(default_box(well), {64});
  const RegionPartition p64 = classify_regions(well, cfg, grid64, 0.5, 0.0, 1, 0);
  CHECK(p64.n_gamma == 64);
  CHECK(p64.n_beta == 0);
  CHECK(p64.n_alpha == 0);

  // 65 points puts the ridge on the lattice; it alone never descends.
  const DomainGrid grid65 = make_grid(default_box(well), {65});
  const RegionPartition p65 = classify_regions(well, cfg, grid65, 0.5, 0.0, 1, 0);
  CHECK(p65.n_gamma == 64);
  CHECK(p65.n_alpha == 1);
  CHECK(p65.n_beta == 0);
  CHECK(p65.alpha_indices == std::vector<std::int64_t>{32});

  // Nothing reaches below -1 on this objective.
  const RegionPartition none = classify_regions(well, cfg, grid64, -1.0, 0.0, 1, 0);
  CHECK(none.n_alpha == 64);
  CHECK(none.n_gamma == 0);
  CHECK(none.n_beta == 0);
}

TEST_CASE("partitions are disjoint and exhaustive") {
  const ObjectiveSpec well = double_well(1);
  DescentConfig cfg;
  cfg.step = 0.05;
  cfg.steps = 10;
  const DomainGrid grid = make_grid(default_box(well), {33});
  const RegionPartition part = classify_regions(well, cfg, grid, 0.2, 0.1, 8, 42);
  CHECK(part.n_alpha + part.n_beta + part.n_gamma == grid.total_points());
  std::vector<char> seen(grid.total_points(), 0);
  for (const auto* ids : {&part.alpha_indices, &part.beta_indices, &part.gamma_indices})
    for (const std::int64_t i : *ids) {
      REQUIRE(i >= 0);
      REQUIRE(i < grid.total_points());
      REQUIRE(seen[i] == 0);
      seen[i] = 1;
    }
  CHECK(part.beta_below_fraction.size() == part.beta_indices.size());
  CHECK(part.beta_zero_error_below.size() == part.beta_indices.size());
  for (const double frac : part.beta_below_fraction) {
    CHECK(frac >= 0.0);
    CHECK(frac <= 1.0);
  }
}

TEST_CASE("error radius turns borderline points into the mixed class") {
  const ObjectiveSpec well = double_well(1);
  DescentConfig cfg;
  cfg.step = 0.05;
  cfg.steps = 20;
  const DomainGrid grid = make_grid(default_box(well), {64});
  // Termini sit at the well bottoms (value ~0): with no errors everything is
  // decisively below 0.001 except the two starts hugging the central ridge
  // (x = +-2/63), which 20 steps cannot push down to the bottoms.
  const RegionPartition clean = classify_regions(well, cfg, grid, 0.001, 0.0, 1, 7);
  CHECK(clean.n_beta == 0);
  CHECK(clean.n_gamma == 62);
  CHECK(clean.n_alpha == 2);
  // Large per-step errors leave some descents short of the bottom.
  const RegionPartition noisy = classify_regions(well, cfg, grid, 0.001, 0.5, 16, 7);
  CHECK(noisy.n_beta > 0);
  // Same seed, same answer.
  const RegionPartition again = classify_regions(well, cfg, grid, 0.001, 0.5, 16, 7);
  CHECK(noisy.beta_indices == again.beta_indices);
  CHECK(noisy.beta_below_fraction == again.beta_below_fraction);
  CHECK_THROWS_AS(classify_regions(well, cfg, grid, 0.0, -0.1, 1, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(classify_regions(well, cfg, grid, 0.0, 0.1, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("ball samples respect the radius and fill the volume") {
  Rng rng(1234);
  const double radius = 0.7;
  int beyond_half = 0;
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> v = sample_ball(rng, 3, radius);
    double norm2 = 0.0;
    for (const double c : v) norm2 += c * c;
    REQUIRE(std::sqrt(norm2) <= radius + 1e-12);
    if (std::sqrt(norm2) > 0.5 * radius) ++beyond_half;
  }
  // In 3 dimensions, 7/8 of the ball's volume lies beyond half the radius.
  CHECK(beyond_half > 1600);
}
