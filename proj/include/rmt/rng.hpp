#pragma once

#include <cstdint>
#include <random>

namespace rmt {

/// Seeded generator used by every sampling routine.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// implements the uniform and Gaussian transforms explicitly, so a given seed
/// yields the same draws with any standard library. A single Rng must not be
/// shared between threads; derive one per replica with mix_seed().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Standard normal draw (Marsaglia polar method).
  double normal();

  /// Fair random sign.
  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-replica seed as a fixed function of (base seed, matrix size, replica index).
constexpr std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t n,
                                 std::uint64_t replica) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ (n * 0xd6e8feb86659fd93ULL));
  h = splitmix64(h ^ (replica + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace rmt
