// objective.cpp — objective family evaluation, grids, and ordinate encoding.
#include "qbhop/objective.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qbhop {

namespace {

constexpr double kEggSigma = 0.18;

void require_dim(const ObjectiveSpec& spec, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != spec.dim)
    throw std::invalid_argument("objective: point dimension " +
                                std::to_string(x.size()) + " != " +
                                std::to_string(spec.dim));
}

double egg_center(const ObjectiveSpec& spec) {
  return std::floor(spec.params[0] / 2.0) + 0.5;
}

}  // namespace

BoxDomain make_box(std::vector<double> lower, std::vector<double> upper) {
  if (lower.size() != upper.size() || lower.empty())
    throw std::invalid_argument("box: bound vectors must be non-empty and equal length");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("box: lower bound must be < upper bound in every dimension");
  return BoxDomain{std::move(lower), std::move(upper)};
}

std::int64_t DomainGrid::total_points() const {
  std::int64_t n = 1;
  for (const std::int64_t m : points_per_dim) n *= m;
  return n;
}

double DomainGrid::spacing(int d) const {
  return (domain.upper[d] - domain.lower[d]) /
         static_cast<double>(points_per_dim[d] - 1);
}

DomainGrid make_grid(BoxDomain box, std::vector<std::int64_t> points_per_dim) {
  if (points_per_dim.size() != box.lower.size())
    throw std::invalid_argument("grid: shape length must match box dimension");
  for (const std::int64_t n : points_per_dim)
    if (n < 2) throw std::invalid_argument("grid: need at least 2 points per dimension");
  return DomainGrid{std::move(box), std::move(points_per_dim)};
}

std::vector<double> index_to_point(const DomainGrid& grid, std::int64_t i) {
  if (i < 0 || i >= grid.total_points())
    throw std::out_of_range("grid index " + std::to_string(i) + " out of range");
  std::vector<double> x(grid.dim());
  for (int d = 0; d < grid.dim(); ++d) {
    const std::int64_t n = grid.points_per_dim[d];
    const std::int64_t id = i % n;
    i /= n;
    const double t = static_cast<double>(id) / static_cast<double>(n - 1);
    x[d] = grid.domain.lower[d] + t * (grid.domain.upper[d] - grid.domain.lower[d]);
  }
  return x;
}

std::int64_t point_to_index(const DomainGrid& grid, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != grid.dim())
    throw std::invalid_argument("grid: point dimension mismatch");
  std::int64_t index = 0;
  std::int64_t stride = 1;
  for (int d = 0; d < grid.dim(); ++d) {
    const std::int64_t n = grid.points_per_dim[d];
    const double span = grid.domain.upper[d] - grid.domain.lower[d];
    const double t = (x[d] - grid.domain.lower[d]) / span * static_cast<double>(n - 1);
    std::int64_t id = std::llround(t);
    id = std::clamp<std::int64_t>(id, 0, n - 1);
    index += id * stride;
    stride *= n;
  }
  return index;
}

ObjectiveSpec quadratic_bowl(int dim) {
  if (dim < 1) throw std::invalid_argument("quadratic_bowl: dim must be >= 1");
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::QuadraticBowl;
  spec.dim = dim;
  return spec;
}

ObjectiveSpec double_well(int dim, double tilt) {
  if (dim < 1) throw std::invalid_argument("double_well: dim must be >= 1");
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::DoubleWell;
  spec.dim = dim;
  spec.params = {tilt};
  return spec;
}

ObjectiveSpec egg_crate(int basins, int dim, double gap) {
  if (basins < 1) throw std::invalid_argument("egg_crate: basins must be >= 1");
  if (dim < 1) throw std::invalid_argument("egg_crate: dim must be >= 1");
  if (gap <= 0.0) throw std::invalid_argument("egg_crate: gap must be > 0");
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::EggCrate;
  spec.dim = dim;
  spec.params = {static_cast<double>(basins), gap};
  return spec;
}

ObjectiveSpec tabulated(std::vector<std::int64_t> shape, std::vector<double> values) {
  if (shape.empty()) throw std::invalid_argument("tabulated: empty shape");
  std::int64_t n = 1;
  for (const std::int64_t m : shape) {
    if (m < 2) throw std::invalid_argument("tabulated: need >= 2 points per dimension");
    n *= m;
  }
  if (static_cast<std::int64_t>(values.size()) != n)
    throw std::invalid_argument("tabulated: value count does not match shape");
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::Tabulated;
  spec.dim = static_cast<int>(shape.size());
  spec.table_box = BoxDomain{std::vector<double>(spec.dim, 0.0),
                             std::vector<double>(spec.dim, 1.0)};
  spec.table_shape = std::move(shape);
  spec.table_values = std::move(values);
  return spec;
}

ObjectiveSpec tabulated_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header))
    throw std::invalid_argument("tabulated csv: empty input");
  std::vector<std::int64_t> fields;
  std::istringstream hs(header);
  std::string cell;
  while (std::getline(hs, cell, ',')) fields.push_back(std::stoll(cell));
  if (fields.empty() || fields[0] < 1 ||
      static_cast<std::int64_t>(fields.size()) != fields[0] + 1)
    throw std::invalid_argument("tabulated csv: header must be 'dims, n_0, ..., n_{dims-1}'");
  std::vector<std::int64_t> shape(fields.begin() + 1, fields.end());
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  return tabulated(std::move(shape), std::move(values));
}

ObjectiveSpec tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("tabulated csv: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return tabulated_from_csv_text(buf.str());
}

namespace {

// Multilinear interpolation of the table over [0,1]^dim.
double table_eval(const ObjectiveSpec& spec, const std::vector<double>& x) {
  const int p = spec.dim;
  std::vector<std::int64_t> base(p);
  std::vector<double> frac(p);
  for (int d = 0; d < p; ++d) {
    const std::int64_t n = spec.table_shape[d];
    double t = std::clamp(x[d], 0.0, 1.0) * static_cast<double>(n - 1);
    std::int64_t b = static_cast<std::int64_t>(std::floor(t));
    b = std::clamp<std::int64_t>(b, 0, n - 2);
    base[d] = b;
    frac[d] = t - static_cast<double>(b);
  }
  double acc = 0.0;
  for (std::uint32_t corner = 0; corner < (1u << p); ++corner) {
    double w = 1.0;
    std::int64_t index = 0;
    std::int64_t stride = 1;
    for (int d = 0; d < p; ++d) {
      const bool hi = (corner >> d) & 1u;
      w *= hi ? frac[d] : 1.0 - frac[d];
      index += (base[d] + (hi ? 1 : 0)) * stride;
      stride *= spec.table_shape[d];
    }
    acc += w * spec.table_values[index];
  }
  return acc;
}

}  // namespace

double evaluate(const ObjectiveSpec& spec, const std::vector<double>& x) {
  require_dim(spec, x);
  switch (spec.kind) {
    case ObjectiveKind::QuadraticBowl: {
      double s = 0.0;
      for (const double v : x) s += v * v;
      return s;
    }
    case ObjectiveKind::DoubleWell: {
      const double tilt = spec.params[0];
      double s = 0.0;
      for (const double v : x) {
        const double w = v * v - 1.0;
        s += w * w + tilt * v;
      }
      return s;
    }
    case ObjectiveKind::EggCrate: {
      const double gap = spec.params[1];
      const double c = egg_center(spec);
      const double u = (x[0] - c) / kEggSigma;
      double s = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * x[0])) -
                 gap * std::exp(-0.5 * u * u);
      for (int d = 1; d < spec.dim; ++d) s += 10.0 * x[d] * x[d];
      return s;
    }
    case ObjectiveKind::Tabulated:
      return table_eval(spec, x);
  }
  throw std::logic_error("objective: unknown kind");
}

std::vector<double> gradient(const ObjectiveSpec& spec, const std::vector<double>& x) {
  require_dim(spec, x);
  std::vector<double> g(spec.dim, 0.0);
  switch (spec.kind) {
    case ObjectiveKind::QuadraticBowl:
      for (int d = 0; d < spec.dim; ++d) g[d] = 2.0 * x[d];
      return g;
    case ObjectiveKind::DoubleWell: {
      const double tilt = spec.params[0];
      for (int d = 0; d < spec.dim; ++d)
        g[d] = 4.0 * x[d] * (x[d] * x[d] - 1.0) + tilt;
      return g;
    }
    case ObjectiveKind::EggCrate: {
      const double gap = spec.params[1];
      const double c = egg_center(spec);
      const double u = (x[0] - c) / kEggSigma;
      g[0] = -std::numbers::pi * std::sin(2.0 * std::numbers::pi * x[0]) +
             gap * (x[0] - c) / (kEggSigma * kEggSigma) * std::exp(-0.5 * u * u);
      for (int d = 1; d < spec.dim; ++d) g[d] = 20.0 * x[d];
      return g;
    }
    case ObjectiveKind::Tabulated: {
      for (int d = 0; d < spec.dim; ++d) {
        const double h = 1.0 / static_cast<double>(spec.table_shape[d] - 1);
        std::vector<double> xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        g[d] = (table_eval(spec, xp) - table_eval(spec, xm)) / (2.0 * h);
      }
      return g;
    }
  }
  throw std::logic_error("objective: unknown kind");
}

BoxDomain default_box(const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveKind::QuadraticBowl:
      return BoxDomain{std::vector<double>(spec.dim, -1.0),
                       std::vector<double>(spec.dim, 1.0)};
    case ObjectiveKind::DoubleWell:
      return BoxDomain{std::vector<double>(spec.dim, -2.0),
                       std::vector<double>(spec.dim, 2.0)};
    case ObjectiveKind::EggCrate: {
      std::vector<double> lo(spec.dim, -1.0), hi(spec.dim, 1.0);
      lo[0] = 0.0;
      hi[0] = spec.params[0];
      return BoxDomain{std::move(lo), std::move(hi)};
    }
    case ObjectiveKind::Tabulated:
      return spec.table_box;
  }
  throw std::logic_error("objective: unknown kind");
}

double lipschitz_bound(const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveKind::QuadraticBowl:
      return 2.0;
    case ObjectiveKind::DoubleWell:
      // |12 x^2 - 4| at the well bottoms x = +-1. The box-global maximum (44
      // at the corners) is irrelevant for stability: the first step from the
      // rim moves inward, and convergence is governed by the curvature of the
      // well the iterates settle into.
      return 8.0;
    case ObjectiveKind::EggCrate: {
      const double gap = spec.params[1];
      const double pi = std::numbers::pi;
      // Separable, so the Hessian is diagonal: the dimension-0 entry is
      // bounded by 2 pi^2 + gap/sigma^2, the transverse entries are 20.
      return std::max(2.0 * pi * pi + gap / (kEggSigma * kEggSigma), 20.0);
    }
    case ObjectiveKind::Tabulated:
      return 0.0;
  }
  throw std::logic_error("objective: unknown kind");
}

std::vector<double> known_minimizer(const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveKind::QuadraticBowl:
      return std::vector<double>(spec.dim, 0.0);
    case ObjectiveKind::DoubleWell: {
      const double tilt = spec.params[0];
      if (tilt == 0.0) return {};  // two tied wells per axis
      // Per-axis stationary condition 4x(x^2-1) + tilt = 0; the global well
      // sits near -sign(tilt). A few Newton steps pin it to machine accuracy.
      double x = tilt > 0.0 ? -1.0 : 1.0;
      for (int it = 0; it < 64; ++it) {
        const double f = 4.0 * x * (x * x - 1.0) + tilt;
        const double fp = 12.0 * x * x - 4.0;
        const double step = f / fp;
        x -= step;
        if (std::abs(step) < 1e-15) break;
      }
      return std::vector<double>(spec.dim, x);
    }
    case ObjectiveKind::EggCrate: {
      std::vector<double> x(spec.dim, 0.0);
      x[0] = egg_center(spec);
      return x;
    }
    case ObjectiveKind::Tabulated: {
      // Multilinear interpolants attain their minimum at a lattice node.
      std::int64_t best = 0;
      for (std::int64_t i = 1; i < static_cast<std::int64_t>(spec.table_values.size()); ++i)
        if (spec.table_values[i] < spec.table_values[best]) best = i;
      DomainGrid grid{spec.table_box, spec.table_shape};
      return index_to_point(grid, best);
    }
  }
  throw std::logic_error("objective: unknown kind");
}

std::uint64_t OrdinateEncoding::encode(double y) const {
  const double steps = (y - offset) / scale;
  const long long q = std::llround(steps);
  const long long m = static_cast<long long>(modulus);
  long long r = q % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

double OrdinateEncoding::decode(std::uint64_t k) const {
  return offset + static_cast<double>(k) * scale;
}

std::uint64_t OrdinateEncoding::add(std::uint64_t a, std::uint64_t b) const {
  return (a + b) % modulus;
}

}  // namespace qbhop
