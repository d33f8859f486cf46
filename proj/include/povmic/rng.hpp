#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace povmic {

/// Deterministic random source. Gaussians are computed by Box-Muller from
/// explicit 53-bit uniforms instead of std::normal_distribution, so a given
/// seed yields the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    // u1 in (0, 1] keeps the log finite.
    double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Real and imaginary parts are independent standard normals.
  std::complex<double> cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return {re, im};
  }

  /// Independent stream derived from this seed; used to decorrelate retries,
  /// trials and per-instance sampling without consuming this generator.
  Rng child(std::uint64_t stream) const {
    return Rng(mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace povmic
