#pragma once

#include <cstdint>
#include <random>

#include "epochbandit/types.hpp"

namespace epochbandit {

// SplitMix64-style combiner; derives disjoint substreams from a master seed.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

// Deterministic random stream. All distributions are generated from raw
// engine output with fixed algorithms (inverse CDF, Box-Muller,
// Marsaglia-Tsang), so sequences depend only on the seed and the build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }
  int uniform_int(int n) { return static_cast<int>(uniform() * n) % n; }

  double normal();
  // Unit-scale gamma variate (Marsaglia-Tsang squeeze for shape >= 1,
  // boosted by U^{1/shape} below 1).
  double gamma(double shape);
  // Beta variate as a ratio of gamma draws.
  double beta(double a, double b);

  // Inverse-CDF draw from a probability vector (linear scan).
  int categorical(const StateDistribution& probs);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace epochbandit
