// rng.cpp — portable distribution draws and substream seed derivation.
#include "qbhop/rng.hpp"

#include <cmath>

namespace qbhop {

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  // Rejection sampling: accept draws above 2^64 mod n so every residue class
  // is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % n;
  }
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, std::string_view label,
                             std::uint64_t a, std::uint64_t b) {
  // FNV-1a over the label bytes and the three integers, then a splitmix64
  // finalizer to spread low-entropy inputs over the whole range.
  std::uint64_t h = 14695981039346656037ULL;
  const auto mix_byte = [&h](std::uint64_t byte) {
    h ^= byte & 0xffULL;
    h *= 1099511628211ULL;
  };
  for (const char ch : label) mix_byte(static_cast<unsigned char>(ch));
  for (int i = 0; i < 8; ++i) mix_byte(master >> (8 * i));
  for (int i = 0; i < 8; ++i) mix_byte(a >> (8 * i));
  for (int i = 0; i < 8; ++i) mix_byte(b >> (8 * i));
  return splitmix64(h);
}

}  // namespace qbhop
