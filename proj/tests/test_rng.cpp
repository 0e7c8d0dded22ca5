// test_rng.cpp — determinism, range, and distribution checks for the generator.
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qbhop/rng.hpp"
#include "qbhop/stats.hpp"

using namespace qbhop;

TEST_CASE("identical seeds replay the identical stream") {
  Rng a(123456789), b(123456789);
  for (int i = 0; i < 200; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(123456789), d(987654321);
  int diff = 0;
  for (int i = 0; i < 16; ++i) diff += c.next_u64() != d.next_u64();
  CHECK(diff > 0);
}

TEST_CASE("uniform stays in [0, 1) and is centered") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("uniform(lo, hi) respects its bounds") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(-3.5, 2.25);
    REQUIRE(v >= -3.5);
    REQUIRE(v < 2.25);
  }
}

TEST_CASE("uniform_int covers {0..n-1} evenly") {
  Rng rng(2024);
  CHECK(rng.uniform_int(1) == 0);

  const int bins = 8, draws = 8000;
  std::vector<std::int64_t> counts(bins, 0);
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = rng.uniform_int(bins);
    REQUIRE(v < static_cast<std::uint64_t>(bins));
    ++counts[v];
  }
  const std::vector<double> expected(bins, static_cast<double>(draws) / bins);
  // 0.99 chi-square quantile at 7 degrees of freedom.
  CHECK(chi_square_stat(counts, expected) < 18.475306906582357);
}

TEST_CASE("gaussian has unit scale") {
  Rng rng(31337);
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(var > 0.94);
  CHECK(var < 1.06);
}

TEST_CASE("substream seeds separate by label and indices") {
  const std::uint64_t master = 99;
  std::set<std::uint64_t> seen;
  seen.insert(substream_seed(master, "alpha"));
  seen.insert(substream_seed(master, "beta"));
  seen.insert(substream_seed(master, "alpha", 1));
  seen.insert(substream_seed(master, "alpha", 0, 1));
  seen.insert(substream_seed(master, "alpha", 1, 1));
  seen.insert(substream_seed(master + 1, "alpha"));
  CHECK(seen.size() == 6);
  CHECK(substream_seed(master, "alpha", 2, 3) == substream_seed(master, "alpha", 2, 3));
}

TEST_CASE("substream streams are pairwise decorrelated enough to diverge") {
  Rng a(substream_seed(5, "trial", 0));
  Rng b(substream_seed(5, "trial", 1));
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += a.next_u64() == b.next_u64();
  CHECK(equal == 0);
}
