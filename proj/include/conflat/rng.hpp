#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>

#include "conflat/multivector.hpp"

namespace conflat {

inline constexpr std::uint64_t kDefaultSeed = 0xC1F0;

// CONFLAT_SEED overrides the default suite seed.
inline std::uint64_t env_seed() {
  if (const char* s = std::getenv("CONFLAT_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 0);
    if (end && *end == '\0') return v;
  }
  return kDefaultSeed;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Per-check generator: independent of check execution order.
struct CheckRng {
  std::mt19937_64 engine;
  CheckRng(std::uint64_t seed, const std::string& check_id)
      : engine(seed ^ fnv1a(check_id)) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }

  Vec box(int dim, double lo, double hi) {
    Vec v(dim);
    for (double& c : v) c = uniform(lo, hi);
    return v;
  }

  Vec unit_vector(int dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(dim);
    double r2 = 0.0;
    do {
      r2 = 0.0;
      for (double& c : v) {
        c = g(engine);
        r2 += c * c;
      }
    } while (r2 < 1e-12);
    const double inv = 1.0 / std::sqrt(r2);
    for (double& c : v) c *= inv;
    return v;
  }

  Vec annulus_point(int dim, double rlo, double rhi) {
    Vec v = unit_vector(dim);
    const double r = uniform(rlo, rhi);
    for (double& c : v) c *= r;
    return v;
  }

  Multivector multivector(int dim, double lo = -1.0, double hi = 1.0) {
    Multivector m(dim);
    for (std::uint32_t b = 0; b < m.size(); ++b) m[b] = uniform(lo, hi);
    return m;
  }

  Multivector random_vector(int dim, double lo = -1.0, double hi = 1.0) {
    return Multivector::from_vector(box(dim, lo, hi));
  }
};

}  // namespace conflat
