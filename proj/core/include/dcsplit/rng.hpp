#pragma once

#include "dcsplit/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dcsplit {

/// Counter-based generator: draw i of stream (seed) is splitmix64(seed, i).
/// Output depends only on (seed, counter), so it is identical across
/// platforms and standard libraries. Normals use the Box-Muller transform on
/// consecutive uniform pairs.
class CounterRng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-counter+box-muller/v1";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform in the open interval (0, 1).
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(std::uint64_t index) const {
    const std::uint64_t pair = index / 2;
    const double u1 = uniform(2 * pair);
    const double u2 = uniform(2 * pair + 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (index % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
  }

  Vec normal_vector(Index n) const {
    Vec out(n);
    for (Index i = 0; i < n; ++i) out[i] = normal(static_cast<std::uint64_t>(i));
    return out;
  }

  Vec uniform_vector(Index n, double lo, double hi) const {
    Vec out(n);
    for (Index i = 0; i < n; ++i) out[i] = lo + (hi - lo) * uniform(static_cast<std::uint64_t>(i));
    return out;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace dcsplit
