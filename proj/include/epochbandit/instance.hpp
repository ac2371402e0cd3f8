#pragma once

#include <string>
#include <vector>

#include "epochbandit/chain.hpp"
#include "epochbandit/reward.hpp"

namespace epochbandit {

/// m arms sharing one hidden state: per-arm transition matrices, per
/// (arm, state) reward kernels, an initial state distribution, and the
/// discount factor governing smoothed rewards.
struct ProblemInstance {
  std::vector<TransitionMatrix> P;
  std::vector<std::vector<RewardKernel>> kernels;  // [arm][state]
  StateDistribution beta1;
  double gamma = 1.0;
  std::string id;

  int arms() const { return static_cast<int>(P.size()); }
  int states() const { return P.empty() ? 0 : static_cast<int>(P.front().rows()); }
};

// Structural and ergodicity validation; throws on the first failure and
// names the offending arm.
void validate(const ProblemInstance& instance);

// Mean reward per state for one arm.
Eigen::VectorXd kernel_means(const ProblemInstance& instance, int arm);

// Expected stationary reward mu_j = sum_s pi_j(s) * mean(kernel(j, s)).
double mu(const ProblemInstance& instance, int arm);

/// Cached per-instance quantities: spectral constants per arm for the
/// instance's discount factor, stationary rewards, gaps, and the optimal
/// arm (lowest index on ties, with the tie flagged).
struct InstanceStats {
  std::vector<ChainStats> chains;
  std::vector<double> mus;
  std::vector<double> gaps;
  int optimal_arm = 0;
  bool tied_optimum = false;
  double mu_star = 0.0;
  double delta_min = 0.0;  // smallest positive gap; 0 when all arms tie
};

InstanceStats analyze(const ProblemInstance& instance);
InstanceStats analyze(const ProblemInstance& instance, double gamma);

std::vector<double> gaps(const ProblemInstance& instance);

}  // namespace epochbandit
