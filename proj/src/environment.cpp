#include "epochbandit/environment.hpp"

#include <cmath>

namespace epochbandit {

namespace {

void check_pull_args(const ProblemInstance& instance, int arm, const StateDistribution& beta,
                     long tau, double gamma) {
  if (arm < 0 || arm >= instance.arms()) throw InvalidArm("arm index out of range");
  if (tau < 1) throw InvalidTau("epoch length must be >= 1");
  if (beta.size() != instance.states())
    throw std::invalid_argument("state distribution size mismatch");
  if (!(gamma > tol::discount_floor) || gamma > 1.0)
    throw std::invalid_argument("discount factor must lie in (1e-9, 1]");
}

}  // namespace

double discount_mass(double gamma, long tau) {
  if (tau < 1) throw InvalidTau("epoch length must be >= 1");
  if (gamma == 1.0) return static_cast<double>(tau);
  return (1.0 - std::pow(gamma, static_cast<double>(tau))) / (1.0 - gamma);
}

EpochOutcome pull_arm(const ProblemInstance& instance, int arm, const StateDistribution& beta,
                      long tau, Rng& rng, StateSampling sampling) {
  check_pull_args(instance, arm, beta, tau, instance.gamma);
  const double gamma = instance.gamma;
  const TransitionMatrix& P = instance.P[arm];
  const auto& kernels = instance.kernels[arm];

  // Horner accumulation: after the loop, numerator = sum_t gamma^{tau-1-t} r_t
  // and mass = sum_t gamma^{tau-1-t}, without underflowing small powers.
  double numerator = 0.0;
  double mass = 0.0;

  EpochOutcome out;
  out.iterations = tau;

  if (sampling == StateSampling::Distribution) {
    StateDistribution b = beta;
    for (long t = 0; t < tau; ++t) {
      const int state = rng.categorical(b);
      const double r = kernels[state].sample(rng);
      numerator = numerator * gamma + r;
      mass = mass * gamma + 1.0;
      b = (P.transpose() * b).eval();
      const double sum = b.sum();
      if (std::abs(sum - 1.0) > tol::distribution_drift) b /= sum;
    }
    out.final_beta = b;
  } else {
    int state = rng.categorical(beta);
    for (long t = 0; t < tau; ++t) {
      const double r = kernels[state].sample(rng);
      numerator = numerator * gamma + r;
      mass = mass * gamma + 1.0;
      state = rng.categorical(P.row(state).transpose());
    }
    out.final_beta = StateDistribution::Zero(instance.states());
    out.final_beta(state) = 1.0;
  }

  const double closed_mass = discount_mass(gamma, tau);
  if (std::abs(mass - closed_mass) > tol::discount_mass_check * std::max(1.0, closed_mass))
    throw std::logic_error("accumulated discount mass deviates from the closed form");

  out.discount_mass = closed_mass;
  out.smoothed_reward = numerator / closed_mass;
  return out;
}

double expected_smoothed_reward(const ProblemInstance& instance, int arm,
                                const StateDistribution& beta, long tau, double gamma) {
  check_pull_args(instance, arm, beta, tau, gamma);
  const TransitionMatrix& P = instance.P[arm];
  const Eigen::VectorXd means = kernel_means(instance, arm);

  double numerator = 0.0;
  StateDistribution b = beta;
  for (long t = 0; t < tau; ++t) {
    numerator = numerator * gamma + b.dot(means);
    b = (P.transpose() * b).eval();
  }
  return numerator / discount_mass(gamma, tau);
}

}  // namespace epochbandit
