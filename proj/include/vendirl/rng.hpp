#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "vendirl/error.hpp"

namespace vendirl {

/// Deterministic random stream. The engine (std::mt19937_64) is fully
/// specified by the standard and all transforms are hand-rolled, so the
/// sampled values do not depend on the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// splitmix64 finalizer; stateless mixing step used for stream derivation.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  /// Derives an independent substream from a master seed and a path of
  /// stream ids (e.g. {kSceneStream, scene_index}).
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix(seed);
    for (std::uint64_t id : path) h = mix(h ^ mix(id));
    return Rng(h);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (two uniforms per draw, no cached state).
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Uniform integer in {0, ..., n-1}.
  int uniform_int(int n) {
    if (n <= 0) fail(ErrorCode::bad_parameter, "uniform_int: n must be positive");
    return static_cast<int>(engine_() % static_cast<std::uint64_t>(n));
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine_;
};

// Stream tags for Rng::derive.
inline constexpr std::uint64_t kPolicyInitStream = 1;
inline constexpr std::uint64_t kSceneStream = 2;
inline constexpr std::uint64_t kEvalStream = 3;
inline constexpr std::uint64_t kDiscInitStream = 4;

}  // namespace vendirl
