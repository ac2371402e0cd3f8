#pragma once

#include <cstdint>
#include <vector>

#include "epochbandit/instance.hpp"

namespace epochbandit {

/// Two arms, two states, deterministic rewards. Arm 0 drives the state to
/// its high-reward state but pays nothing from the start state, so
/// iteration-granular policies underestimate it; arm 1 is the mirrored
/// constant-0.5 trap. epsilon in (0, 0.5) is the leak probability back to
/// the start state.
ProblemInstance example1(double epsilon, double gamma = 1.0);

/// One arm whose stationary distribution (epsilon, 1 - epsilon) pays
/// rewards (0, 1) but whose initial state pays 0: the first epoch loses
/// nearly the full stationary reward despite a zero gap.
ProblemInstance penalty_example(double epsilon, double gamma = 1.0);

// All draws concentrated betas and narrow uniforms; Bernoulli kernels only
// appear when requested explicitly.
enum class KernelFamilySet { All, BernoulliOnly, BetaOnly, UniformOnly };

struct GeneratorSpec {
  int m = 4;
  int states = 4;
  std::uint64_t seed = 0;
  // Probability mass the optimal arm keeps inside its favored state subset;
  // suboptimal arms place at most 1 - mass there.
  double anti_correlation_mass = 0.95;
  KernelFamilySet kernel_palette = KernelFamilySet::All;
  double gamma = 1.0;
};

/// Random anti-correlated instance: the favored arm concentrates on the
/// first ceil(states/2) states, every other arm avoids them, and kernel
/// means increase with each arm's own stationary probabilities. Retries
/// (up to 100, advancing the seed) until all chains pass the assumption
/// checks, the favored arm is the unique optimum, and the smallest gap is
/// at least 0.01.
ProblemInstance generate(const GeneratorSpec& spec);

enum class RandomMatrixDistribution { Uniform, AbsNormal };

/// Row-normalized random transition matrix. Uniform: i.i.d. U(0,1) entries.
/// AbsNormal: N(0,1) entries with negative mass clipped to zero before
/// normalization; resampled if a row dies or the chain fails the
/// assumption checks.
TransitionMatrix sample_random_transition(RandomMatrixDistribution dist, int states,
                                          std::uint64_t seed);

struct SpectrumSample {
  double lambda2M;  // second eigenvalue of M(P)
  double lambda;    // its square root, the mixing rate
};

/// Spectral statistics experiment: draws `samples` random matrices and
/// records lambda2(M(P)) and lambda = sqrt(lambda2(M(P))) for each.
std::vector<SpectrumSample> spectrum_samples(RandomMatrixDistribution dist, int states,
                                             int samples, std::uint64_t seed);

}  // namespace epochbandit
