#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace risopt {

/// Deterministic random stream. Substreams are derived by hashing a tuple of
/// indices into a fresh seed, so Monte Carlo trials draw from independent
/// streams regardless of scheduling order. All distributions are generated
/// from raw 64-bit draws with fixed formulas; mt19937_64 is fully specified
/// by the standard, so identical seeds give identical sequences everywhere.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  /// splitmix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Stream for (master, a, b, c); distinct tuples give unrelated streams.
  static RandomStream derive(std::uint64_t master, std::uint64_t a,
                             std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix(master ^ 0x8e9c1fd42a6b07c3ULL);
    s = mix(s ^ mix(a ^ 0x4cf5ad432745937fULL));
    s = mix(s ^ mix(b ^ 0x2545f4914f6cdd1dULL));
    s = mix(s ^ mix(c ^ 0x9e6c63d0873b19a5ULL));
    return RandomStream(s);
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTau * u2);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  /// Laplacian with standard deviation sigma via inverse CDF:
  /// x = mu - s*sign(u)*ln(1 - 2|u|), u ~ U(-1/2, 1/2), s = sigma/sqrt(2).
  double laplacian(double mu, double sigma) {
    double u;
    do {
      u = uniform() - 0.5;
    } while (u <= -0.5);  // excludes the log(0) endpoint
    const double s = sigma / std::sqrt(2.0);
    const double mag = -s * std::log(1.0 - 2.0 * std::abs(u));
    return u < 0.0 ? mu - mag : mu + mag;
  }

 private:
  static constexpr double kTau = 6.28318530717958647692;
  std::mt19937_64 gen_;
};

}  // namespace risopt
