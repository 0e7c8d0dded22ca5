// objective.hpp — objective families on box domains, grid discretization, and
// the fixed-point ordinate encoding used by the search registers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbhop {

struct BoxDomain {
  std::vector<double> lower;
  std::vector<double> upper;

  int dim() const { return static_cast<int>(lower.size()); }
};

// Validates lower[i] < upper[i] and equal lengths.
BoxDomain make_box(std::vector<double> lower, std::vector<double> upper);

// Uniform lattice over a box, endpoints included in every dimension.
// Indexing is row-major with dimension 0 fastest-varying.
struct DomainGrid {
  BoxDomain domain;
  std::vector<std::int64_t> points_per_dim;

  std::int64_t total_points() const;
  int dim() const { return domain.dim(); }
  // Lattice spacing along dimension d (points_per_dim[d] >= 2).
  double spacing(int d) const;
};

DomainGrid make_grid(BoxDomain box, std::vector<std::int64_t> points_per_dim);

std::vector<double> index_to_point(const DomainGrid& grid, std::int64_t i);
// Inverse of index_to_point on lattice points (coordinates are rounded to the
// nearest lattice site, so nearby off-lattice points map to their cell).
std::int64_t point_to_index(const DomainGrid& grid, const std::vector<double>& x);

enum class ObjectiveKind { QuadraticBowl, DoubleWell, EggCrate, Tabulated };

// A member of one of the built-in families, or a tabulated grid of values.
// Construct through the factory functions below so params are laid out right.
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::QuadraticBowl;
  int dim = 1;
  std::vector<double> params;

  // Tabulated payload (unused for analytic families).
  std::vector<std::int64_t> table_shape;
  std::vector<double> table_values;
  BoxDomain table_box;
};

// f(x) = ||x||^2, minimum 0 at the origin. Natural box [-1, 1]^dim.
ObjectiveSpec quadratic_bowl(int dim);

// Separable double well: f(x) = sum_i [(x_i^2 - 1)^2 + tilt * x_i].
// tilt = 0 gives two equally deep wells per axis; tilt > 0 deepens the well
// near -1 so the minimum is unique. Natural box [-2, 2]^dim.
ObjectiveSpec double_well(int dim, double tilt = 0.0);

// Egg-crate with `basins` wells along dimension 0 and a Gaussian dip that
// makes exactly one of them global:
//   f(x) = (1 + cos(2 pi x_0)) / 2 - gap * exp(-(x_0 - c)^2 / (2 sigma^2))
//          + 10 * sum_{i>=1} x_i^2,   c = floor(basins/2) + 1/2, sigma = 0.18.
// All wells except the dipped one share floor value 0 (up to a tail below
// 1e-7); the global floor is exactly -gap at (c, 0, ..., 0). Natural box
// [0, basins] x [-1, 1]^(dim-1).
ObjectiveSpec egg_crate(int basins, int dim, double gap = 0.25);

// Grid of sampled values; evaluate() interpolates multilinearly and
// gradient() takes central differences at the grid spacing. The box is
// [0, 1]^dims.
ObjectiveSpec tabulated(std::vector<std::int64_t> shape, std::vector<double> values);

// CSV layout: one header line "dims, n_0, n_1, ..." then one value per line
// in index order (dimension 0 fastest).
ObjectiveSpec tabulated_from_csv(const std::string& path);
ObjectiveSpec tabulated_from_csv_text(const std::string& text);

double evaluate(const ObjectiveSpec& spec, const std::vector<double>& x);
std::vector<double> gradient(const ObjectiveSpec& spec, const std::vector<double>& x);

// The box each family is intended to be sampled on (see factory docs).
BoxDomain default_box(const ObjectiveSpec& spec);

// Curvature bound near the family's minima: the spectral norm of the Hessian
// over the basins fixed-step descent settles into (not the box-global
// maximum). 0 means unknown (tabulated). The CLI warns when the step size
// times this bound reaches 1.
double lipschitz_bound(const ObjectiveSpec& spec);

// Where the family's global minimum sits on the default box, if known.
// Empty for tabulated specs and for the untilted double well (ties).
std::vector<double> known_minimizer(const ObjectiveSpec& spec);

// Fixed-point encoding of ordinate values into a wrap-around register.
// decode(encode(y)) == y within scale/2 over the representable range;
// addition of encoded values wraps modulo `modulus`.
struct OrdinateEncoding {
  double scale = 0x1.0p-16;
  std::uint64_t modulus = std::uint64_t{1} << 32;
  double offset = -32768.0;

  std::uint64_t encode(double y) const;
  double decode(std::uint64_t k) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
};

}  // namespace qbhop
