#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epochbandit/bounds.hpp"
#include "epochbandit/environment.hpp"
#include "epochbandit/instances.hpp"

namespace epochbandit {

enum class PolicyId { EpochUcb, EpochGreedy, Ucb1, UcbTuned, EpsGreedy, Exp3, LinQ };

bool is_epoch_policy(PolicyId id);
const char* policy_name(PolicyId id);
std::optional<PolicyId> parse_policy(const std::string& name);

struct PolicyParams {
  EpochSchedule schedule{1, 1};
  // Exploration constants for the epsilon-decay policies. Unset c selects
  // the tuned default d^2/m for the greedy epoch policy (exploration 1/k)
  // and 1.0 for the iteration-granular one; unset d selects the true
  // smallest gap (oracle access).
  std::optional<double> c;
  std::optional<double> d;
  double c_prime = 8.1;
  double gamma_rl = 0.9;
  bool trajectory_sampling = false;
};

struct RunConfig {
  ProblemInstance instance;
  PolicyId policy = PolicyId::EpochUcb;
  PolicyParams params;
  std::optional<long> epochs;      // epoch horizon n
  std::optional<long> iterations;  // total iteration budget
  int replications = 1;
  std::uint64_t master_seed = 0;
  // Iteration traces keep every record_stride-th record (plus the last);
  // accumulated regret between records is never lost.
  long record_stride = 1;
};

struct EpochRecord {
  long k = 0;
  int arm = 0;
  long tau = 0;
  double reward = 0.0;
  long cum_iterations = 0;
  // Regret accumulated since the previous record, in the policy's own
  // granularity: mu* - smoothed_reward per epoch, sum of mu* - r_t for
  // iteration policies.
  double regret_increment = 0.0;
  // Regret mass on the shared iteration axis: tau * (mu* - smoothed_reward)
  // for epochs, identical to regret_increment for iteration records.
  double projected_increment = 0.0;
};

struct RunTrace {
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<EpochRecord> records;
  std::vector<long> pulls;
  double cum_regret = 0.0;
  long total_iterations = 0;
  double mu_star = 0.0;
};

/// One seeded replication of an epoch-granular policy. The regret column
/// follows the epoch definition: increments mu* - smoothed_reward.
RunTrace run_epoch_policy(const RunConfig& config, int replication);

/// One seeded replication of an iteration-granular policy; increments are
/// mu* - r_t.
RunTrace run_iteration_policy(const RunConfig& config, int replication);

RunTrace run_policy(const RunConfig& config, int replication);

/// All replications, executed in parallel; results ordered by replication
/// index regardless of scheduling.
std::vector<RunTrace> run_all(const RunConfig& config);

struct AggregateCurve {
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stderr_;
  int replications = 0;
};

/// Cumulative regret against cumulative iterations on a fixed grid, so
/// traces with different epoch boundaries aggregate cleanly. Epoch records
/// contribute tau * (mu* - reward) spread linearly across the epoch (exact
/// for time-averaged feedback, labeled an approximation for
/// discount-averaged feedback); iteration records contribute stepwise. The
/// final grid point is the exact shared budget.
AggregateCurve iteration_regret_projection(const std::vector<RunTrace>& traces, long budget,
                                           int grid_points = 200);

/// Mean and standard error of cumulative epoch regret at each epoch index.
AggregateCurve epoch_regret_curve(const std::vector<RunTrace>& traces);

/// Slope of the mean cumulative curve over its trailing window.
double late_window_slope(const AggregateCurve& curve, double window_fraction = 0.2);

struct SuboptimalPlays {
  std::vector<double> mean;
  std::vector<double> stderr_;
  int replications = 0;
};

/// Monte-Carlo estimate of the pull counts T_j(n) across replications.
SuboptimalPlays estimate_suboptimal_plays(const RunConfig& config);

struct SelectionFrequency {
  std::vector<double> frequency;  // index k-1
  std::vector<double> stderr_;
  int replications = 0;
};

/// Per-epoch frequency of suboptimal selections across replications.
SelectionFrequency suboptimal_selection_frequency(const RunConfig& config);

// -- Deterministic inequality audits ----------------------------------------

struct AuditGrid {
  long tau_max = 50;
  std::vector<double> gammas{0.5, 0.9, 1.0};
  std::vector<EpochSchedule> schedules{EpochSchedule(1, 1), EpochSchedule(40, 1)};
  long lemma2_pulls = 200;
};

struct AuditCheck {
  std::string name;
  long checks = 0;
  long violations = 0;
  double max_ratio = 0.0;  // lhs / rhs, worst case over the grid
  double min_slack = 0.0;  // rhs - lhs, worst case
  std::string worst_input;
};

struct AuditReport {
  AuditCheck lemma1;
  AuditCheck lemma2;
  bool ok() const { return lemma1.violations == 0 && lemma2.violations == 0; }
};

/// Sampling-free checks of the reward-convergence inequalities over a grid
/// of initial distributions (corners, uniform, stationary), epoch lengths,
/// discount factors and schedules.
AuditReport audit_inequalities(const ProblemInstance& instance, const AuditGrid& grid = {});

struct FillAuditReport {
  AuditCheck fill;
  bool ok() const { return fill.violations == 0; }
};

/// Geometric convergence audit on random ergodic chains: squared total
/// variation after n steps against the chi-squared bound, corner starts,
/// n in [1, n_max].
FillAuditReport audit_fill(int chains, int max_states, long n_max, std::uint64_t seed);

/// Mean final regret per candidate; returns the minimizing c_prime.
double select_c_prime_by_grid(const RunConfig& base_config,
                              const std::vector<double>& candidates = {8.1, 9, 12, 16, 32});

}  // namespace epochbandit
