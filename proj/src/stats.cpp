// stats.cpp — summaries, least squares, chi-square.
#include "qbhop/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbhop {

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean: empty input");
  double s = 0.0;
  for (const double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares: need two equal-length samples");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares: degenerate x values");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

double chi_square_stat(const std::vector<std::int64_t>& counts,
                       const std::vector<double>& expected) {
  if (counts.size() != expected.size() || counts.empty())
    throw std::invalid_argument("chi_square_stat: need equal-length non-empty inputs");
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (expected[i] <= 0.0)
      throw std::invalid_argument("chi_square_stat: expected counts must be positive");
    const double d = static_cast<double>(counts[i]) - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

}  // namespace qbhop
