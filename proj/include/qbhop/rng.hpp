// rng.hpp — seeded 64-bit generator with portable distributions and named substreams.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qbhop {

// All randomness in the library flows through this wrapper. The distributions
// are hand-rolled (not std::uniform_real_distribution etc.) so that a given
// seed produces the same draw sequence on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in {0, ..., n-1}; n must be >= 1.
  std::uint64_t uniform_int(std::uint64_t n);

  // Standard normal via the polar method, with the spare deviate cached.
  double gaussian();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives an independent seed for a named substream of a master seed. Streams
// differ if the label or either index differs; the mapping is fixed forever so
// recorded runs stay reproducible.
std::uint64_t substream_seed(std::uint64_t master, std::string_view label,
                             std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace qbhop
