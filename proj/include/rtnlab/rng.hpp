#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace rtnlab {

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Counter-based substream key: trials and vertices get independent streams
/// derived from the master seed, so results do not depend on execution
/// order or thread count.
inline uint64_t substream_key(uint64_t master, uint64_t trial, uint64_t vertex) {
  uint64_t s = master;
  uint64_t k = splitmix64(s);
  s = k ^ (0xd1342543de82ef95ull * (trial + 1));
  k = splitmix64(s);
  s = k ^ (0xaf251af3b0f025b5ull * (vertex + 1));
  return splitmix64(s);
}

/// Standard normal source over a fixed-seed mt19937_64; Box-Muller written
/// out so the byte stream is identical across standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(uint64_t key) : gen_(key) {}

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Circularly-symmetric complex Gaussian: (x + iy)/sqrt(2) with x, y
  /// independent standard normals.
  std::complex<double> complex_normal() {
    double x = normal();
    double y = normal();
    return {x * std::numbers::sqrt2 / 2.0, y * std::numbers::sqrt2 / 2.0};
  }

 private:
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Substream factory handed to one Monte Carlo trial.
struct TrialRng {
  uint64_t master = 0;
  uint64_t trial = 0;

  GaussianSource vertex_source(uint64_t vertex) const {
    return GaussianSource(substream_key(master, trial, vertex));
  }
};

}  // namespace rtnlab
