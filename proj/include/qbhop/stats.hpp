// stats.hpp — small statistics helpers: summaries, least squares, chi-square.
#pragma once

#include <cstdint>
#include <vector>

namespace qbhop {

double mean(const std::vector<double>& values);

// Median with the usual midpoint convention for even counts. Takes a copy.
double median(std::vector<double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of y against x.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// Pearson chi-square statistic against the given expected counts.
double chi_square_stat(const std::vector<std::int64_t>& counts,
                       const std::vector<double>& expected);

}  // namespace qbhop
