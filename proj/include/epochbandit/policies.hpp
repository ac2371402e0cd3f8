#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "epochbandit/rng.hpp"
#include "epochbandit/schedule.hpp"
#include "epochbandit/types.hpp"

namespace epochbandit {

// Evaluates the mixing-penalty bound L_j(T) for arm j after T pulls.
// Policies treat it as an opaque oracle supplied by the caller.
using BoundEvaluator = std::function<double(int arm, long pulls)>;

struct ArmStats {
  long pulls = 0;
  double mean_reward = 0.0;
};

/// Exact running mean: r <- r + (x - r) / (T + 1), then T <- T + 1.
ArmStats update_mean(ArmStats stats, double reward);

/// L / T + sqrt(6 ln(k) / T). Natural logarithm.
double confidence_window(long k, long pulls, double l_value);

/// Arm with the largest mean + window at epoch k; lowest index on ties.
/// Requires every arm pulled at least once.
int epochucb_select(long k, const std::vector<ArmStats>& stats, const BoundEvaluator& l_bound);

/// Exploration constants for the decaying-epsilon policy. A conforming
/// configuration satisfies c >= c_prime * nu^2 with c_prime > 8,
/// nu = max(kappa, d / sqrt(c_prime)) and 0 < d <= Delta_min; the empirical
/// runs may override c downward (tuned regime).
struct GreedyConfig {
  double c = 0.0;
  double d = 0.0;
  double c_prime = 8.1;
  double kappa = 0.0;
  double nu = 0.0;
  double c_dblprime = 0.0;
};

/// Builds a config from the mixing constant kappa and gap lower bound d.
/// Without an override, c = c_prime * nu^2 (the smallest conforming value).
GreedyConfig make_greedy_config(double kappa, double d, double c_prime = 8.1,
                                std::optional<double> c_override = std::nullopt);

/// Exploration probability min(1, c m / (d^2 k)).
double epsilon_k(const GreedyConfig& config, int m, long k);

/// Smallest kappa with kappa sqrt(i) >= L_j(i) for all i in [1, n], j in [m];
/// exhaustive scan.
double kappa_constant(const BoundEvaluator& l_bound, long n, int m);

/// Exploit the best empirical mean with probability 1 - eps_k, otherwise
/// pick uniformly. Arms never pulled carry mean 0.
int epochgreedy_select(long k, const std::vector<ArmStats>& stats, const GreedyConfig& config,
                       Rng& rng);

// -- Iteration-granular baselines ------------------------------------------

/// Classic index mean + sqrt(2 ln(t) / T); unpulled arms first.
int ucb1_select(long t, const std::vector<ArmStats>& stats);

struct ArmStatsVar {
  long pulls = 0;
  double mean = 0.0;
  double mean_sq = 0.0;
};

ArmStatsVar update_var(ArmStatsVar stats, double reward);

/// Variance-tuned index: mean + sqrt((ln(t)/T) * min(1/4, V + sqrt(2 ln(t)/T)))
/// with V the empirical variance.
int ucb_tuned_select(long t, const std::vector<ArmStatsVar>& stats);

/// epsilon_t = min(1, c m / (d^2 t)) exploration over the empirical best.
int eps_greedy_select(long t, const std::vector<ArmStats>& stats, double c, double d, int m,
                      Rng& rng);

/// Mixing coefficient min(1, sqrt(m ln(m) / ((e - 1) total_rounds))).
double exp3_mix(int m, long total_rounds);

/// Selection probabilities (1 - mix) w_i / sum(w) + mix / m.
std::vector<double> exp3_probabilities(const std::vector<double>& weights, double mix);

/// Importance-weighted exponential update for the drawn arm; weights are
/// rescaled when they grow large so they stay finite.
std::vector<double> exp3_step(std::vector<double> weights, int arm, double reward, double mix);

// -- Q-learning with linear value approximation -----------------------------
//
// Features phi(beta, a) place the observed state distribution in the block
// of coordinates reserved for action a (dimension states * m).

Eigen::VectorXd linq_features(const StateDistribution& beta, int action, int m);

double linq_q(const Eigen::VectorXd& w, const StateDistribution& beta, int action, int m);

/// One temporal-difference step on the squared loss against the target
/// r + gamma_rl * max_a' Q(beta_next, a'), with step size 1 / sqrt(k).
Eigen::VectorXd linq_step(Eigen::VectorXd w, const StateDistribution& beta, int action,
                          double reward, const StateDistribution& beta_next, double gamma_rl,
                          long k);

int linq_select(const Eigen::VectorXd& w, const StateDistribution& beta, int m, double epsilon,
                Rng& rng);

/// Exponential decay 0.05^{2t/total}: drops below 0.05 after half the horizon.
double linq_epsilon(long t, long total);

}  // namespace epochbandit
