#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace lgl {

using Rng = std::mt19937_64;

// splitmix64 finalizer; derives independent stream seeds from one user seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [0,1) from the top 53 bits. std::uniform_real_distribution is
// implementation-defined, which would break cross-toolchain reproducibility.
inline double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw; the last action with positive mass absorbs rounding.
inline int draw_action(Rng& rng, std::span<const double> probs) {
  const double u = unit_uniform(rng);
  double acc = 0.0;
  int last = 0;
  for (int j = 0; j < static_cast<int>(probs.size()); ++j) {
    if (probs[j] <= 0.0) continue;
    last = j;
    acc += probs[j];
    if (u < acc) return j;
  }
  return last;
}

}  // namespace lgl
