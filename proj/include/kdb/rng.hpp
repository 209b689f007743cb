#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace kdb {

// splitmix64; portable and fast, used instead of std distributions so that
// sampled streams are byte-identical across standard libraries.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {}

  // Independent stream for sample #index of a run with the given seed.
  static Rng for_index(std::uint64_t seed, std::uint64_t index) {
    Rng r(seed);
    r.state += 0xbf58476d1ce4e5b9ull * (index + 1);
    r.next();
    r.next();
    return r;
  }

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi) {
    return lo * std::pow(hi / lo, uniform());
  }

  // Standard normal via Box-Muller (deterministic given the stream).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  std::uint32_t below(std::uint32_t n) { return std::uint32_t(next() % n); }
};

// Van der Corput radical inverse in the given base.
inline double radical_inverse(std::uint64_t i, std::uint32_t base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i > 0) {
    x += f * double(i % base);
    i /= base;
    f *= inv;
  }
  return x;
}

// Halton point #i in [0,1)^dim (dim <= 10).
inline std::vector<double> halton(std::uint64_t i, std::size_t dim) {
  static const std::uint32_t primes[10] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  std::vector<double> u(dim);
  for (std::size_t d = 0; d < dim; ++d) u[d] = radical_inverse(i + 1, primes[d]);
  return u;
}

}  // namespace kdb
