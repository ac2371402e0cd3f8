#include "epochbandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace epochbandit {

namespace {

template <typename F>
int argmax_lowest_index(int m, F&& value) {
  int best = 0;
  double best_value = value(0);
  for (int j = 1; j < m; ++j) {
    const double v = value(j);
    if (v > best_value) {
      best = j;
      best_value = v;
    }
  }
  return best;
}

}  // namespace

ArmStats update_mean(ArmStats stats, double reward) {
  stats.mean_reward += (reward - stats.mean_reward) / static_cast<double>(stats.pulls + 1);
  stats.pulls += 1;
  return stats;
}

double confidence_window(long k, long pulls, double l_value) {
  if (k < 1 || pulls < 1) throw std::invalid_argument("confidence window requires k >= 1, T >= 1");
  if (l_value < 0.0) throw std::invalid_argument("bound value must be nonnegative");
  const double t = static_cast<double>(pulls);
  return l_value / t + std::sqrt(6.0 * std::log(static_cast<double>(k)) / t);
}

int epochucb_select(long k, const std::vector<ArmStats>& stats, const BoundEvaluator& l_bound) {
  const int m = static_cast<int>(stats.size());
  for (int j = 0; j < m; ++j)
    if (stats[j].pulls == 0) throw UninitializedArm("arm " + std::to_string(j) + " never pulled");
  return argmax_lowest_index(m, [&](int j) {
    return stats[j].mean_reward + confidence_window(k, stats[j].pulls, l_bound(j, stats[j].pulls));
  });
}

GreedyConfig make_greedy_config(double kappa, double d, double c_prime,
                                std::optional<double> c_override) {
  if (!(d > 0.0)) throw std::invalid_argument("gap lower bound d must be positive");
  if (!(c_prime > 8.0)) throw std::invalid_argument("c_prime must exceed 8");
  GreedyConfig config;
  config.kappa = kappa;
  config.d = d;
  config.c_prime = c_prime;
  config.nu = std::max(kappa, d / std::sqrt(c_prime));
  config.c = c_override.value_or(c_prime * config.nu * config.nu);
  const double root = std::sqrt(c_prime / 2.0) - 2.0;
  config.c_dblprime = 4.0 * c_prime / (root * root);
  return config;
}

double epsilon_k(const GreedyConfig& config, int m, long k) {
  if (k < 1) throw std::invalid_argument("epoch index must be >= 1");
  return std::min(1.0, config.c * m / (config.d * config.d * static_cast<double>(k)));
}

double kappa_constant(const BoundEvaluator& l_bound, long n, int m) {
  if (n < 1) throw std::invalid_argument("horizon must be >= 1");
  double kappa = 0.0;
  for (int j = 0; j < m; ++j)
    for (long i = 1; i <= n; ++i)
      kappa = std::max(kappa, l_bound(j, i) / std::sqrt(static_cast<double>(i)));
  return kappa;
}

int epochgreedy_select(long k, const std::vector<ArmStats>& stats, const GreedyConfig& config,
                       Rng& rng) {
  const int m = static_cast<int>(stats.size());
  if (rng.uniform() < epsilon_k(config, m, k)) return rng.uniform_int(m);
  return argmax_lowest_index(m, [&](int j) { return stats[j].mean_reward; });
}

int ucb1_select(long t, const std::vector<ArmStats>& stats) {
  const int m = static_cast<int>(stats.size());
  for (int j = 0; j < m; ++j)
    if (stats[j].pulls == 0) return j;
  const double logt = std::log(std::max<double>(static_cast<double>(t), 1.0));
  return argmax_lowest_index(m, [&](int j) {
    return stats[j].mean_reward + std::sqrt(2.0 * logt / static_cast<double>(stats[j].pulls));
  });
}

ArmStatsVar update_var(ArmStatsVar stats, double reward) {
  const double n = static_cast<double>(stats.pulls + 1);
  stats.mean += (reward - stats.mean) / n;
  stats.mean_sq += (reward * reward - stats.mean_sq) / n;
  stats.pulls += 1;
  return stats;
}

int ucb_tuned_select(long t, const std::vector<ArmStatsVar>& stats) {
  const int m = static_cast<int>(stats.size());
  for (int j = 0; j < m; ++j)
    if (stats[j].pulls == 0) return j;
  const double logt = std::log(std::max<double>(static_cast<double>(t), 1.0));
  return argmax_lowest_index(m, [&](int j) {
    const double T = static_cast<double>(stats[j].pulls);
    const double variance = std::max(0.0, stats[j].mean_sq - stats[j].mean * stats[j].mean);
    const double v = variance + std::sqrt(2.0 * logt / T);
    return stats[j].mean + std::sqrt(logt / T * std::min(0.25, v));
  });
}

int eps_greedy_select(long t, const std::vector<ArmStats>& stats, double c, double d, int m,
                      Rng& rng) {
  if (t < 1) throw std::invalid_argument("iteration index must be >= 1");
  const double eps = std::min(1.0, c * m / (d * d * static_cast<double>(t)));
  if (rng.uniform() < eps) return rng.uniform_int(m);
  return argmax_lowest_index(m, [&](int j) { return stats[j].mean_reward; });
}

double exp3_mix(int m, long total_rounds) {
  const double e = std::exp(1.0);
  return std::min(1.0, std::sqrt(m * std::log(static_cast<double>(m)) /
                                 ((e - 1.0) * static_cast<double>(total_rounds))));
}

std::vector<double> exp3_probabilities(const std::vector<double>& weights, double mix) {
  const int m = static_cast<int>(weights.size());
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<double> probs(m);
  for (int j = 0; j < m; ++j) probs[j] = (1.0 - mix) * weights[j] / sum + mix / m;
  return probs;
}

std::vector<double> exp3_step(std::vector<double> weights, int arm, double reward, double mix) {
  const int m = static_cast<int>(weights.size());
  const std::vector<double> probs = exp3_probabilities(weights, mix);
  const double estimate = reward / probs[arm];
  weights[arm] *= std::exp(mix * estimate / m);

  double max_w = 0.0;
  for (double w : weights) max_w = std::max(max_w, w);
  if (max_w > 1e100) {
    for (double& w : weights) w /= max_w;
  }
  return weights;
}

Eigen::VectorXd linq_features(const StateDistribution& beta, int action, int m) {
  const int s = static_cast<int>(beta.size());
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s) * m);
  phi.segment(static_cast<Eigen::Index>(action) * s, s) = beta;
  return phi;
}

double linq_q(const Eigen::VectorXd& w, const StateDistribution& beta, int action, int /*m*/) {
  const int s = static_cast<int>(beta.size());
  return w.segment(static_cast<Eigen::Index>(action) * s, s).dot(beta);
}

Eigen::VectorXd linq_step(Eigen::VectorXd w, const StateDistribution& beta, int action,
                          double reward, const StateDistribution& beta_next, double gamma_rl,
                          long k) {
  const int s = static_cast<int>(beta.size());
  const int m = static_cast<int>(w.size()) / s;
  double best_next = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < m; ++a) best_next = std::max(best_next, linq_q(w, beta_next, a, m));
  const double target = reward + gamma_rl * best_next;
  const double q = linq_q(w, beta, action, m);
  const double step = 1.0 / std::sqrt(static_cast<double>(k));
  // Gradient of (1/2)(target - q)^2 in w, target held fixed.
  w.segment(static_cast<Eigen::Index>(action) * s, s) += step * (target - q) * beta;
  return w;
}

int linq_select(const Eigen::VectorXd& w, const StateDistribution& beta, int m, double epsilon,
                Rng& rng) {
  if (rng.uniform() < epsilon) return rng.uniform_int(m);
  return argmax_lowest_index(m, [&](int a) { return linq_q(w, beta, a, m); });
}

double linq_epsilon(long t, long total) {
  if (total < 1) return 0.0;
  return std::pow(0.05, 2.0 * static_cast<double>(t) / static_cast<double>(total));
}

}  // namespace epochbandit
