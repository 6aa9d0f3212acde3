#pragma once

// Monomer/block labels and the deterministic seed derivation used by every
// randomised estimator. Replica streams depend only on (seed, replica index),
// so results do not depend on evaluation order or thread count.

#include <cstdint>
#include <random>
#include <vector>

namespace emulsion {

enum class Label : std::uint8_t { A = 0, B = 1 };

inline char to_char(Label l) { return l == Label::A ? 'A' : 'B'; }

/// SplitMix64 finaliser.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed of replica `index` derived from a run seed.
inline constexpr std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ull));
}

/// Uniform [0, 1) variate attached to lattice cell (i, j) under `seed`.
inline double cell_uniform(std::uint64_t seed, std::int64_t i, std::int64_t j) {
  const std::uint64_t h = mix64(mix64(seed ^ mix64(static_cast<std::uint64_t>(i))) ^
                                static_cast<std::uint64_t>(j) * 0xD6E8FEB86659FD93ull);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Fair-coin monomer sequence of length n.
inline std::vector<Label> sample_sequence(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<Label> out(n);
  for (auto& l : out) l = (gen() >> 63) ? Label::B : Label::A;
  return out;
}

}  // namespace emulsion
