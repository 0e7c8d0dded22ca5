// test_objective.cpp — objective values, gradients, grids, the egg-crate
// floor structure, and the ordinate encoding.
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "qbhop/localsearch.hpp"
#include "qbhop/objective.hpp"
#include "qbhop/rng.hpp"

using namespace qbhop;

TEST_CASE("grid endpoints and spacing") {
  const DomainGrid grid = make_grid(make_box({0.0}, {1.0}), {5});
  CHECK(grid.total_points() == 5);
  CHECK(index_to_point(grid, 0)[0] == doctest::Approx(0.0));
  CHECK(index_to_point(grid, 4)[0] == doctest::Approx(1.0));
  CHECK(grid.spacing(0) == doctest::Approx(0.25));
}

TEST_CASE("row-major index order puts dimension 0 fastest") {
  const DomainGrid grid = make_grid(make_box({0.0, 0.0}, {1.0, 1.0}), {3, 3});
  const std::vector<double> center = index_to_point(grid, 4);
  CHECK(center[0] == doctest::Approx(0.5));
  CHECK(center[1] == doctest::Approx(0.5));
  const std::vector<double> second = index_to_point(grid, 1);
  CHECK(second[0] == doctest::Approx(0.5));
  CHECK(second[1] == doctest::Approx(0.0));
}

TEST_CASE("index round trip over whole grids") {
  for (const auto& shape : {std::vector<std::int64_t>{7},
                            std::vector<std::int64_t>{4, 5},
                            std::vector<std::int64_t>{3, 2, 4}}) {
    std::vector<double> lo(shape.size(), -1.5), hi(shape.size(), 2.0);
    const DomainGrid grid = make_grid(make_box(lo, hi), shape);
    for (std::int64_t i = 0; i < grid.total_points(); ++i)
      CHECK(point_to_index(grid, index_to_point(grid, i)) == i);
  }
}

TEST_CASE("grid construction rejects bad shapes") {
  CHECK_THROWS_AS(make_box({0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(make_box({0.0}, {1.0}), {1}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(make_box({0.0}, {1.0}), {2, 2}), std::invalid_argument);
  const DomainGrid grid = make_grid(make_box({0.0}, {1.0}), {4});
  CHECK_THROWS_AS(index_to_point(grid, 4), std::out_of_range);
  CHECK_THROWS_AS(index_to_point(grid, -1), std::out_of_range);
}

TEST_CASE("quadratic bowl values and gradients") {
  const ObjectiveSpec bowl = quadratic_bowl(2);
  CHECK(evaluate(bowl, {0.5, 0.5}) == doctest::Approx(0.5));
  const std::vector<double> g = gradient(bowl, {1.0, -2.0});
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[1] == doctest::Approx(-4.0));
  CHECK_THROWS_AS(evaluate(bowl, {1.0}), std::invalid_argument);
}

TEST_CASE("double well values and gradients") {
  const ObjectiveSpec well = double_well(1);
  CHECK(evaluate(well, {1.0}) == doctest::Approx(0.0));
  CHECK(evaluate(well, {-1.0}) == doctest::Approx(0.0));
  CHECK(evaluate(well, {0.0}) == doctest::Approx(1.0));
  CHECK(gradient(well, {0.5})[0] == doctest::Approx(-1.5));

  const ObjectiveSpec tilted = double_well(1, 0.4);
  CHECK(evaluate(tilted, {1.0}) == doctest::Approx(0.4));
  CHECK(evaluate(tilted, {-1.0}) == doctest::Approx(-0.4));
  // The unique minimizer sits in the deeper (negative) well.
  const std::vector<double> xstar = known_minimizer(tilted);
  CHECK(xstar[0] < -1.0);
  CHECK(gradient(tilted, xstar)[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(known_minimizer(double_well(1)).empty());
}

TEST_CASE("egg crate geometry: wells, dip, and exact global floor") {
  for (const int basins : {2, 4, 8, 16}) {
    const ObjectiveSpec egg = egg_crate(basins, 2);
    const std::vector<double> xstar = known_minimizer(egg);
    CHECK(xstar[0] == doctest::Approx(std::floor(basins / 2.0) + 0.5));
    CHECK(xstar[1] == 0.0);
    CHECK(evaluate(egg, xstar) == doctest::Approx(-0.25).epsilon(1e-12));

    // One cosine well per unit interval: count local minima of the profile.
    int wells = 0;
    const int samples = 400 * basins;
    double prev = evaluate(egg, {0.0, 0.0});
    double cur = evaluate(egg, {basins / static_cast<double>(samples), 0.0});
    for (int i = 2; i <= samples; ++i) {
      const double next =
          evaluate(egg, {basins * static_cast<double>(i) / samples, 0.0});
      if (cur < prev && cur <= next) ++wells;
      prev = cur;
      cur = next;
    }
    CHECK(wells == basins);

    const BoxDomain box = default_box(egg);
    CHECK(box.lower[0] == 0.0);
    CHECK(box.upper[0] == doctest::Approx(static_cast<double>(basins)));
    CHECK(box.lower[1] == -1.0);
    CHECK(box.upper[1] == 1.0);
  }
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(404);
  const double h = 1e-5;
  for (const ObjectiveSpec& spec :
       {quadratic_bowl(3), double_well(2, 0.3), egg_crate(8, 2)}) {
    const BoxDomain box = default_box(spec);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(spec.dim);
      for (int d = 0; d < spec.dim; ++d)
        x[d] = rng.uniform(box.lower[d] + 0.1, box.upper[d] - 0.1);
      const std::vector<double> g = gradient(spec, x);
      for (int d = 0; d < spec.dim; ++d) {
        std::vector<double> xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        const double fd = (evaluate(spec, xp) - evaluate(spec, xm)) / (2.0 * h);
        CHECK(g[d] == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("tabulated objectives interpolate their grid") {
  const ObjectiveSpec ramp = tabulated({3}, {0.0, 0.5, 1.0});
  CHECK(evaluate(ramp, {0.25}) == doctest::Approx(0.25));
  CHECK(evaluate(ramp, {1.0}) == doctest::Approx(1.0));
  CHECK(gradient(ramp, {0.5})[0] == doctest::Approx(1.0));

  const ObjectiveSpec parsed = tabulated_from_csv_text("1, 3\n3\n1\n2\n");
  CHECK(parsed.dim == 1);
  CHECK(evaluate(parsed, {0.5}) == doctest::Approx(1.0));
  CHECK(known_minimizer(parsed)[0] == doctest::Approx(0.5));
  CHECK(lipschitz_bound(parsed) == 0.0);

  CHECK_THROWS_AS(tabulated_from_csv_text("2, 3\n1\n2\n3\n"), std::invalid_argument);
  CHECK_THROWS_AS(tabulated({3}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("ordinate encoding round-trips and wraps") {
  const OrdinateEncoding enc;
  CHECK(enc.encode(-0.25) == 2147467264ULL);
  CHECK(enc.decode(enc.encode(-0.25)) == doctest::Approx(-0.25).epsilon(1e-15));
  for (const double y : {0.0, 0.5, -1.0, 100.25, -32768.0, 12345.678}) {
    CHECK(std::abs(enc.decode(enc.encode(y)) - y) <= enc.scale / 2.0);
  }
  // Values below the register floor wrap around to the top.
  CHECK(enc.encode(-32768.0) == 0ULL);
  CHECK(enc.encode(-32768.0 - enc.scale) == enc.modulus - 1);
  CHECK(enc.add(enc.modulus - 1, 2) == 1ULL);
}

TEST_CASE("egg crate termini quantize onto exactly three floors") {
  // 64x64 grid, default step and 20 iterations: every start point's descent
  // terminus must land within a half encoding quantum of one of the three
  // floor values 0 (plain wells), -gap (the dipped well), 1 (stuck ridges at
  // the two x0 box faces), so threshold-marking at register resolution is
  // exact. Also pins the marked-set size at a threshold just below 0.
  const OrdinateEncoding enc;
  DescentConfig dcfg;
  dcfg.step = 0.035;
  dcfg.steps = 20;
  // The global basin covers exactly 1/basins of the grid: 64/basins interior
  // columns of 64 rows each. (At basins = 2 the right box face also drains
  // into the dipped well - it sits only half a unit from the dip center - so
  // the count stays exactly n/basins there too.)
  const std::vector<std::pair<int, std::int64_t>> expected_marked = {
      {2, 2048}, {4, 1024}, {8, 512}, {16, 256}};
  for (const auto& [basins, marked] : expected_marked) {
    const ObjectiveSpec egg = egg_crate(basins, 2);
    const DomainGrid grid = make_grid(default_box(egg), {64, 64});
    const std::set<std::uint64_t> floors = {enc.encode(0.0), enc.encode(-0.25),
                                            enc.encode(1.0)};
    std::int64_t below = 0;
    for (std::int64_t i = 0; i < grid.total_points(); ++i) {
      const double y = deterministic_terminus_value(egg, dcfg, grid, i);
      const std::uint64_t code = enc.encode(y);
      REQUIRE(floors.count(code) == 1);
      REQUIRE(std::abs(y - enc.decode(code)) < 1e-5);
      if (code == enc.encode(-0.25)) ++below;
    }
    CHECK(below == marked);
  }
}
