#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace attnkit {

/// SplitMix64 finalizer; used to spread low-entropy seeds and combine hashes.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e91dull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ull;  // FNV-1a prime
  }
  return state;
}

/// Derives a substream seed from a global seed plus identifying context.
/// Stable across platforms and runs; serial and parallel execution agree.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view id,
                                 std::string_view tag, std::uint64_t index) {
  std::uint64_t h = hash_bytes(id);
  h = hash_bytes(tag, h ^ 0x9ae16a3b2f90404full);
  return mix64(global_seed ^ mix64(h) ^ (index * 0xd6e8feb86659fd93ull));
}

/// Seeded random stream with portable samplers. The mt19937_64 engine is
/// fully specified by the standard and the distribution transforms below are
/// hand-rolled, so identical seeds produce identical sequences on every
/// platform and standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1]; safe to pass to log().
  double uniform_positive() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto wide = static_cast<unsigned __int128>(next_u64());
    return lo + static_cast<std::int64_t>((wide * span) >> 64);
  }

  /// Standard normal via Box-Muller (no cached spare, keeps streams splittable).
  double normal() {
    const double u1 = uniform_positive();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Gamma(shape, 1) via Marsaglia-Tsang squeeze.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform_positive();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = 0.0;
      double v = 0.0;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_positive();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  /// Child stream with an independent state, derived deterministically.
  RandomStream split(std::uint64_t stream_id) {
    return RandomStream(mix64(next_u64() ^ mix64(stream_id)));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace attnkit
