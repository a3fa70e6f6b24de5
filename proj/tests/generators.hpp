#pragma once

// Hand-rolled generators for the property tests. Every generator takes the
// engine explicitly so a failing case can be replayed from its seed.

#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace gen {

using Engine = std::mt19937_64;

inline std::int64_t integer(Engine& g, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(g);
}

inline double real(Engine& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

// A pair (a, b) in [lo, hi]^2 with gcd(a, b) = 1.
inline std::pair<std::int64_t, std::int64_t> coprime_pair(Engine& g, std::int64_t lo, std::int64_t hi) {
  for (;;) {
    const auto a = integer(g, lo, hi), b = integer(g, lo, hi);
    if (std::gcd(a, b) == 1) return {a, b};
  }
}

// A complex number in the closed unit disc.
inline std::complex<double> unit_disc(Engine& g) {
  for (;;) {
    const std::complex<double> z{real(g, -1, 1), real(g, -1, 1)};
    if (std::abs(z) <= 1.0) return z;
  }
}

inline std::vector<std::complex<double>> disc_vector(Engine& g, std::size_t n) {
  std::vector<std::complex<double>> v(n);
  for (auto& z : v) z = unit_disc(g);
  return v;
}

}  // namespace gen
