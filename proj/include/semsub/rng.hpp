#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "semsub/matrix.hpp"

namespace semsub {

// Seeded random stream. mt19937_64 output is specified bit-exactly by the
// standard, and the uniform/normal transforms below are implemented here
// rather than via std distributions (whose draw sequences are
// implementation-defined), so a seed pins the entire stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Marsaglia polar; the spare deviate is cached.
  double normal() {
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
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  // Row-major fill of standard normals.
  Matrix gaussian(std::size_t rows, std::size_t cols) {
    Matrix out(rows, cols);
    for (double& v : out.data()) v = normal();
    return out;
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent stream seed for a named sub-purpose so that one
// user-facing seed can feed several generators without overlap.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step on seed xor stream tag
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace semsub
