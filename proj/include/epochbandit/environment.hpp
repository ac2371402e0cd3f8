#pragma once

#include "epochbandit/instance.hpp"

namespace epochbandit {

struct EpochOutcome {
  double smoothed_reward = 0.0;
  double discount_mass = 0.0;  // S = sum of the discount weights in the epoch
  StateDistribution final_beta;
  long iterations = 0;
};

/// How the per-iteration state is drawn inside an epoch.
///
/// Distribution: each iteration samples the state fresh from the current
/// distribution beta_t and advances beta by a full matrix product. This is
/// the reference semantics used by every test and bound audit.
/// Trajectory: a single state path is sampled (theta_{t+1} ~ P(theta_t, .));
/// the returned final_beta is the indicator of the final state. Offered for
/// realism experiments only.
enum class StateSampling { Distribution, Trajectory };

/// Closed-form sum of discount weights: tau when gamma = 1, else
/// (1 - gamma^tau) / (1 - gamma).
double discount_mass(double gamma, long tau);

/// Plays one arm for tau iterations and returns the smoothed reward: the
/// discount-average for gamma < 1, the time-average for gamma = 1.
EpochOutcome pull_arm(const ProblemInstance& instance, int arm, const StateDistribution& beta,
                      long tau, Rng& rng, StateSampling sampling = StateSampling::Distribution);

/// Exact expected smoothed reward under distribution sampling:
/// (1/S) * sum_{t=0}^{tau-1} gamma^{tau-1-t} <beta P^t, kernel means>.
/// Deterministic; no randomness involved.
double expected_smoothed_reward(const ProblemInstance& instance, int arm,
                                const StateDistribution& beta, long tau, double gamma);

}  // namespace epochbandit
