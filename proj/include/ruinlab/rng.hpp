#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace ruinlab {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream identifiers. A trial's randomness is a pure function of
// (master seed, stream, index), never of thread scheduling.
enum class Stream : std::uint64_t {
  Trial = 1,
  Yinf = 2,
  YinfTilde = 3,
  Block = 4,
  Validation = 5,
  Synthetic = 6,
};

// xoshiro256++ with counter-style keyed construction.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept {
    std::uint64_t key = splitmix64(seed);
    key = splitmix64(key ^ (static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ULL));
    key = splitmix64(key ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
    for (auto& s : state_) {
      key += 0x9E3779B97F4A7C15ULL;
      s = splitmix64(key);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

  // Marsaglia polar method; the spare deviate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double x, y, s;
    do {
      x = 2.0 * uniform() - 1.0;
      y = 2.0 * uniform() - 1.0;
      s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = y * f;
    has_spare_ = true;
    return x * f;
  }

  // Marsaglia-Tsang; shape > 0, unit scale.
  double gamma(double shape) noexcept {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double z, v;
      do {
        z = normal();
        v = 1.0 + c * z;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
      if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Counts unit-rate exponential arrivals before `mean`; fine for the small means used here.
  std::uint64_t poisson(double mean) noexcept {
    std::uint64_t k = 0;
    double t = 0.0;
    for (;;) {
      t += exponential(1.0);
      if (t > mean) return k;
      ++k;
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ruinlab
