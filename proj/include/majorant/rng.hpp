#pragma once

#include <cstdint>
#include <random>

namespace majorant {

using Rng = std::mt19937_64;

/// Root of all randomness in an experiment. Every trial gets its own
/// generator through derive(trial), so results do not depend on the order
/// or the thread in which trials run.
struct Seed {
  std::uint64_t base = 0;
  std::uint64_t stream = 0;

  static constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Seed value for trial `index`.
  constexpr std::uint64_t derive(std::uint64_t index) const {
    return splitmix64(splitmix64(splitmix64(base) ^ stream) + index);
  }

  Rng rng(std::uint64_t index) const { return Rng(derive(index)); }

  /// A sub-seed for an independent component (e.g. one size of a sweep).
  Seed child(std::uint64_t tag) const { return Seed{base, splitmix64(stream ^ splitmix64(tag + 1))}; }

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Uniform double in [0, 1) built from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace majorant
