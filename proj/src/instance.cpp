#include "epochbandit/instance.hpp"

#include <cmath>
#include <limits>

namespace epochbandit {

void validate(const ProblemInstance& instance) {
  if (instance.P.empty()) throw std::invalid_argument("instance has no arms");
  const int m = instance.arms();
  const int s = instance.states();
  if (static_cast<int>(instance.kernels.size()) != m)
    throw std::invalid_argument("kernel table must have one row per arm");
  if (!(instance.gamma > tol::discount_floor) || instance.gamma > 1.0)
    throw std::invalid_argument("discount factor must lie in (1e-9, 1]");
  if (instance.beta1.size() != s)
    throw std::invalid_argument("initial distribution size does not match the state count");
  if (instance.beta1.minCoeff() < 0.0 || std::abs(instance.beta1.sum() - 1.0) > tol::row_stochastic)
    throw std::invalid_argument("initial distribution must be a probability vector");

  for (int j = 0; j < m; ++j) {
    if (instance.P[j].rows() != s || instance.P[j].cols() != s)
      throw std::invalid_argument("arm " + std::to_string(j) + ": state count mismatch");
    if (static_cast<int>(instance.kernels[j].size()) != s)
      throw std::invalid_argument("arm " + std::to_string(j) + ": kernel count mismatch");
    const AssumptionReport report = check_assumptions(instance.P[j]);
    if (!report.ok())
      throw NonErgodicChain("arm " + std::to_string(j) + " fails the chain assumptions (irreducible=" +
                            std::to_string(report.irreducible) +
                            ", aperiodic=" + std::to_string(report.aperiodic) +
                            ", M_irreducible=" + std::to_string(report.m_irreducible) + ")");
  }
}

Eigen::VectorXd kernel_means(const ProblemInstance& instance, int arm) {
  const int s = instance.states();
  Eigen::VectorXd means(s);
  for (int i = 0; i < s; ++i) means(i) = instance.kernels[arm][i].mean();
  return means;
}

double mu(const ProblemInstance& instance, int arm) {
  if (arm < 0 || arm >= instance.arms()) throw InvalidArm("arm index out of range");
  const StateDistribution pi = stationary_distribution(instance.P[arm]);
  return pi.dot(kernel_means(instance, arm));
}

InstanceStats analyze(const ProblemInstance& instance) { return analyze(instance, instance.gamma); }

InstanceStats analyze(const ProblemInstance& instance, double gamma) {
  const int m = instance.arms();
  InstanceStats stats;
  stats.chains.reserve(m);
  stats.mus.resize(m);
  for (int j = 0; j < m; ++j) {
    stats.chains.push_back(chain_stats(instance.P[j], gamma));
    stats.mus[j] = stats.chains[j].pi.dot(kernel_means(instance, j));
  }
  stats.optimal_arm = 0;
  for (int j = 1; j < m; ++j) {
    if (stats.mus[j] > stats.mus[stats.optimal_arm]) stats.optimal_arm = j;
  }
  stats.mu_star = stats.mus[stats.optimal_arm];
  stats.gaps.resize(m);
  stats.delta_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    stats.gaps[j] = stats.mu_star - stats.mus[j];
    if (j != stats.optimal_arm) {
      if (stats.gaps[j] == 0.0) stats.tied_optimum = true;
      if (stats.gaps[j] > 0.0) stats.delta_min = std::min(stats.delta_min, stats.gaps[j]);
    }
  }
  if (!std::isfinite(stats.delta_min)) stats.delta_min = 0.0;
  return stats;
}

std::vector<double> gaps(const ProblemInstance& instance) { return analyze(instance).gaps; }

}  // namespace epochbandit
