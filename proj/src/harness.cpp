#include "epochbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

namespace epochbandit {

bool is_epoch_policy(PolicyId id) {
  return id == PolicyId::EpochUcb || id == PolicyId::EpochGreedy;
}

const char* policy_name(PolicyId id) {
  switch (id) {
    case PolicyId::EpochUcb:
      return "epochucb";
    case PolicyId::EpochGreedy:
      return "epochgreedy";
    case PolicyId::Ucb1:
      return "ucb1";
    case PolicyId::UcbTuned:
      return "ucbtuned";
    case PolicyId::EpsGreedy:
      return "epsgreedy";
    case PolicyId::Exp3:
      return "exp3";
    case PolicyId::LinQ:
      return "linq";
  }
  return "";
}

std::optional<PolicyId> parse_policy(const std::string& name) {
  for (PolicyId id : {PolicyId::EpochUcb, PolicyId::EpochGreedy, PolicyId::Ucb1,
                      PolicyId::UcbTuned, PolicyId::EpsGreedy, PolicyId::Exp3, PolicyId::LinQ}) {
    if (name == policy_name(id)) return id;
  }
  return std::nullopt;
}

namespace {

struct RunContext {
  InstanceStats stats;
  double mu_star = 0.0;
  int optimal_arm = 0;
};

RunContext make_context(const ProblemInstance& instance) {
  RunContext ctx;
  ctx.stats = analyze(instance);
  ctx.mu_star = ctx.stats.mu_star;
  ctx.optimal_arm = ctx.stats.optimal_arm;
  return ctx;
}

bool budget_reached(const RunConfig& config, long k_done, long cum_iterations) {
  if (config.epochs && k_done >= *config.epochs) return true;
  if (config.iterations && cum_iterations >= *config.iterations) return true;
  return false;
}

double resolve_gap_floor(const RunConfig& config, const RunContext& ctx) {
  if (config.params.d) return *config.params.d;
  return ctx.stats.delta_min > 0.0 ? ctx.stats.delta_min : 1.0;
}

}  // namespace

RunTrace run_epoch_policy(const RunConfig& config, int replication) {
  if (!is_epoch_policy(config.policy))
    throw std::invalid_argument("run_epoch_policy requires an epoch-granular policy");
  if (!config.epochs && !config.iterations)
    throw std::invalid_argument("either an epoch horizon or an iteration budget is required");

  const ProblemInstance& instance = config.instance;
  const RunContext ctx = make_context(instance);
  const EpochSchedule& schedule = config.params.schedule;
  const int m = instance.arms();
  const StateSampling sampling = config.params.trajectory_sampling ? StateSampling::Trajectory
                                                                   : StateSampling::Distribution;

  // Mixing-penalty evaluator for the confidence window. A non-conforming
  // constant-epoch schedule has no finite penalty bound; the window then
  // degenerates to the plain sqrt term, which is the failure mode the
  // constant-epoch experiment exhibits.
  BoundEvaluator l_bound;
  if (schedule.conforming()) {
    BoundInputs inputs = make_bound_inputs(instance, schedule, instance.gamma,
                                           config.epochs.value_or(1));
    l_bound = l_evaluator(inputs);
  } else {
    l_bound = [](int, long) { return 0.0; };
  }

  GreedyConfig greedy;
  if (config.policy == PolicyId::EpochGreedy) {
    const double d = resolve_gap_floor(config, ctx);
    // Tuned default: c m / d^2 = 4, i.e. exploration 4/k once k > 4.
    const double tuned_default = 4.0 * d * d / m;
    greedy = make_greedy_config(0.0, d, config.params.c_prime,
                                config.params.c.value_or(tuned_default));
  }

  Rng rng(mix64(config.master_seed, static_cast<std::uint64_t>(replication)));

  RunTrace trace;
  trace.policy = policy_name(config.policy);
  trace.seed = mix64(config.master_seed, static_cast<std::uint64_t>(replication));
  trace.pulls.assign(m, 0);
  trace.mu_star = ctx.mu_star;

  std::vector<ArmStats> stats(m);
  StateDistribution beta = instance.beta1;
  long cum_iterations = 0;
  long k = 0;

  auto play = [&](int arm) {
    const long tau = epoch_length(schedule, stats[arm].pulls);
    const EpochOutcome outcome = pull_arm(instance, arm, beta, tau, rng, sampling);
    beta = outcome.final_beta;
    stats[arm] = update_mean(stats[arm], outcome.smoothed_reward);
    trace.pulls[arm] += 1;
    cum_iterations += tau;
    ++k;

    EpochRecord rec;
    rec.k = k;
    rec.arm = arm;
    rec.tau = tau;
    rec.reward = outcome.smoothed_reward;
    rec.cum_iterations = cum_iterations;
    rec.regret_increment = ctx.mu_star - outcome.smoothed_reward;
    rec.projected_increment = static_cast<double>(tau) * rec.regret_increment;
    trace.records.push_back(rec);
    trace.cum_regret += rec.regret_increment;
  };

  if (config.policy == PolicyId::EpochUcb) {
    for (int arm = 0; arm < m && !budget_reached(config, k, cum_iterations); ++arm) play(arm);
    while (!budget_reached(config, k, cum_iterations))
      play(epochucb_select(k + 1, stats, l_bound));
  } else {
    while (!budget_reached(config, k, cum_iterations))
      play(epochgreedy_select(k + 1, stats, greedy, rng));
  }

  trace.total_iterations = cum_iterations;
  return trace;
}

RunTrace run_iteration_policy(const RunConfig& config, int replication) {
  if (is_epoch_policy(config.policy))
    throw std::invalid_argument("run_iteration_policy requires an iteration-granular policy");
  if (!config.iterations)
    throw std::invalid_argument("iteration-granular policies require an iteration budget");

  const ProblemInstance& instance = config.instance;
  const RunContext ctx = make_context(instance);
  const int m = instance.arms();
  const int s = instance.states();
  const long budget = *config.iterations;
  const long stride = std::max<long>(1, config.record_stride);

  Rng rng(mix64(config.master_seed, static_cast<std::uint64_t>(replication)));

  RunTrace trace;
  trace.policy = policy_name(config.policy);
  trace.seed = mix64(config.master_seed, static_cast<std::uint64_t>(replication));
  trace.pulls.assign(m, 0);
  trace.mu_star = ctx.mu_star;

  std::vector<ArmStats> stats(m);
  std::vector<ArmStatsVar> var_stats(m);
  std::vector<double> exp3_weights(m, 1.0);
  const double mix = exp3_mix(m, budget);
  Eigen::VectorXd linq_w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s) * m);

  const double eps_c = config.params.c.value_or(1.0);
  const double eps_d = resolve_gap_floor(config, ctx);

  StateDistribution beta = instance.beta1;
  double pending_regret = 0.0;

  for (long t = 1; t <= budget; ++t) {
    int arm = 0;
    switch (config.policy) {
      case PolicyId::Ucb1:
        arm = ucb1_select(t, stats);
        break;
      case PolicyId::UcbTuned:
        arm = ucb_tuned_select(t, var_stats);
        break;
      case PolicyId::EpsGreedy:
        arm = eps_greedy_select(t, stats, eps_c, eps_d, m, rng);
        break;
      case PolicyId::Exp3: {
        const std::vector<double> probs = exp3_probabilities(exp3_weights, mix);
        const double u = rng.uniform();
        double cum = 0.0;
        arm = m - 1;
        for (int j = 0; j < m; ++j) {
          cum += probs[j];
          if (u < cum) {
            arm = j;
            break;
          }
        }
        break;
      }
      case PolicyId::LinQ:
        arm = linq_select(linq_w, beta, m, linq_epsilon(t, budget), rng);
        break;
      default:
        break;
    }

    const int state = rng.categorical(beta);
    const double reward = instance.kernels[arm][state].sample(rng);
    const StateDistribution beta_next = evolve(beta, instance.P[arm], 1);

    stats[arm] = update_mean(stats[arm], reward);
    var_stats[arm] = update_var(var_stats[arm], reward);
    if (config.policy == PolicyId::Exp3)
      exp3_weights = exp3_step(std::move(exp3_weights), arm, reward, mix);
    if (config.policy == PolicyId::LinQ)
      linq_w = linq_step(std::move(linq_w), beta, arm, reward, beta_next, config.params.gamma_rl, t);

    beta = beta_next;
    trace.pulls[arm] += 1;
    const double increment = ctx.mu_star - reward;
    trace.cum_regret += increment;
    pending_regret += increment;

    if (t % stride == 0 || t == budget) {
      EpochRecord rec;
      rec.k = t;
      rec.arm = arm;
      rec.tau = 1;
      rec.reward = reward;
      rec.cum_iterations = t;
      rec.regret_increment = pending_regret;
      rec.projected_increment = pending_regret;
      trace.records.push_back(rec);
      pending_regret = 0.0;
    }
  }

  trace.total_iterations = budget;
  return trace;
}

RunTrace run_policy(const RunConfig& config, int replication) {
  return is_epoch_policy(config.policy) ? run_epoch_policy(config, replication)
                                        : run_iteration_policy(config, replication);
}

std::vector<RunTrace> run_all(const RunConfig& config) {
  const int reps = config.replications;
  std::vector<RunTrace> traces(reps);
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> futures;
  std::atomic<int> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&]() {
      for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1))
        traces[r] = run_policy(config, r);
    }));
  }
  for (auto& f : futures) f.get();
  return traces;
}

namespace {

// Cumulative projected regret as a piecewise-linear function of iterations.
double projected_regret_at(const RunTrace& trace, double x) {
  double cum = 0.0;
  double prev_x = 0.0;
  for (const EpochRecord& rec : trace.records) {
    const double rec_x = static_cast<double>(rec.cum_iterations);
    if (x <= rec_x) {
      const double span = rec_x - prev_x;
      const double frac = (span > 0.0) ? (x - prev_x) / span : 1.0;
      return cum + frac * rec.projected_increment;
    }
    cum += rec.projected_increment;
    prev_x = rec_x;
  }
  return cum;
}

void mean_stderr(const std::vector<double>& values, double& mean_out, double& stderr_out) {
  const int n = static_cast<int>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var = (n > 1) ? var / (n - 1) : 0.0;
  mean_out = mean;
  stderr_out = std::sqrt(var / n);
}

}  // namespace

AggregateCurve iteration_regret_projection(const std::vector<RunTrace>& traces, long budget,
                                           int grid_points) {
  AggregateCurve curve;
  curve.replications = static_cast<int>(traces.size());
  for (int g = 1; g <= grid_points; ++g) {
    const double x = static_cast<double>(budget) * g / grid_points;
    std::vector<double> values;
    values.reserve(traces.size());
    for (const RunTrace& t : traces) values.push_back(projected_regret_at(t, x));
    double m = 0.0, se = 0.0;
    mean_stderr(values, m, se);
    curve.x.push_back(x);
    curve.mean.push_back(m);
    curve.stderr_.push_back(se);
  }
  return curve;
}

AggregateCurve epoch_regret_curve(const std::vector<RunTrace>& traces) {
  AggregateCurve curve;
  curve.replications = static_cast<int>(traces.size());
  size_t n = std::numeric_limits<size_t>::max();
  for (const RunTrace& t : traces) n = std::min(n, t.records.size());
  std::vector<double> cums(traces.size(), 0.0);
  for (size_t k = 0; k < n; ++k) {
    std::vector<double> values;
    values.reserve(traces.size());
    for (size_t r = 0; r < traces.size(); ++r) {
      cums[r] += traces[r].records[k].regret_increment;
      values.push_back(cums[r]);
    }
    double m = 0.0, se = 0.0;
    mean_stderr(values, m, se);
    curve.x.push_back(static_cast<double>(k + 1));
    curve.mean.push_back(m);
    curve.stderr_.push_back(se);
  }
  return curve;
}

double late_window_slope(const AggregateCurve& curve, double window_fraction) {
  if (curve.x.size() < 2) return 0.0;
  const double x_end = curve.x.back();
  const double x_start = x_end * (1.0 - window_fraction);
  size_t i = 0;
  while (i + 1 < curve.x.size() && curve.x[i] < x_start) ++i;
  const double dx = x_end - curve.x[i];
  if (dx <= 0.0) return 0.0;
  return (curve.mean.back() - curve.mean[i]) / dx;
}

SuboptimalPlays estimate_suboptimal_plays(const RunConfig& config) {
  const std::vector<RunTrace> traces = run_all(config);
  const int m = config.instance.arms();
  SuboptimalPlays plays;
  plays.replications = static_cast<int>(traces.size());
  plays.mean.resize(m);
  plays.stderr_.resize(m);
  for (int j = 0; j < m; ++j) {
    std::vector<double> values;
    values.reserve(traces.size());
    for (const RunTrace& t : traces) values.push_back(static_cast<double>(t.pulls[j]));
    mean_stderr(values, plays.mean[j], plays.stderr_[j]);
  }
  return plays;
}

SelectionFrequency suboptimal_selection_frequency(const RunConfig& config) {
  if (!config.epochs) throw std::invalid_argument("selection frequency requires an epoch horizon");
  const InstanceStats stats = analyze(config.instance);
  const std::vector<RunTrace> traces = run_all(config);
  const long n = *config.epochs;
  const int reps = static_cast<int>(traces.size());

  SelectionFrequency freq;
  freq.replications = reps;
  freq.frequency.assign(n, 0.0);
  for (const RunTrace& t : traces) {
    for (const EpochRecord& rec : t.records) {
      if (rec.k <= n && rec.arm != stats.optimal_arm) freq.frequency[rec.k - 1] += 1.0;
    }
  }
  freq.stderr_.resize(n);
  for (long k = 0; k < n; ++k) {
    const double p = freq.frequency[k] / reps;
    freq.frequency[k] = p;
    freq.stderr_[k] = std::sqrt(p * (1.0 - p) / reps);
  }
  return freq;
}

namespace {

std::vector<StateDistribution> audit_betas(int states) {
  std::vector<StateDistribution> betas;
  for (int sidx = 0; sidx < states; ++sidx) {
    StateDistribution corner = StateDistribution::Zero(states);
    corner(sidx) = 1.0;
    betas.push_back(corner);
  }
  betas.push_back(StateDistribution::Constant(states, 1.0 / states));
  return betas;
}

// ratio_floor: below this scale both sides are dominated by roundoff, so
// the ratio is tracked only above it; the violation rule always applies.
void record_check(AuditCheck& check, double lhs, double rhs, const std::string& input,
                  double ratio_floor = 1e-9) {
  check.checks += 1;
  const double slack = rhs - lhs;
  if (rhs > ratio_floor) {
    const double ratio = lhs / rhs;
    if (check.worst_input.empty() || ratio > check.max_ratio) {
      check.max_ratio = ratio;
      check.worst_input = input;
    }
  }
  if (check.checks == 1 || slack < check.min_slack) check.min_slack = slack;
  if (lhs > rhs * (1.0 + 1e-9) + tol::audit_slack) check.violations += 1;
}

}  // namespace

AuditReport audit_inequalities(const ProblemInstance& instance, const AuditGrid& grid) {
  AuditReport report;
  report.lemma1.name = "expected-reward-convergence";
  report.lemma2.name = "mean-reward-convergence";
  const int m = instance.arms();
  const int s = instance.states();
  const std::vector<StateDistribution> betas = audit_betas(s);

  for (double gamma : grid.gammas) {
    std::vector<ChainStats> stats;
    std::vector<double> lambdas;
    for (int j = 0; j < m; ++j) {
      stats.push_back(chain_stats(instance.P[j], gamma));
      lambdas.push_back(stats.back().lambda);
    }
    const FeedbackBranch branch = branch_for(gamma, lambdas);

    for (int j = 0; j < m; ++j) {
      const double mu_j = stats[j].pi.dot(kernel_means(instance, j));

      for (const StateDistribution& beta : betas) {
        for (long tau = 1; tau <= grid.tau_max; ++tau) {
          const double lhs = std::abs(mu_j - expected_smoothed_reward(instance, j, beta, tau, gamma));
          const double rhs =
              stats[j].C * upsilon(stats[j], gamma, tau, branch) / discount_mass(gamma, tau);
          std::ostringstream oss;
          oss << instance.id << " arm=" << j << " gamma=" << gamma << " tau=" << tau;
          record_check(report.lemma1, lhs, rhs, oss.str());
        }
      }

      for (const EpochSchedule& schedule : grid.schedules) {
        for (const StateDistribution& beta0 : betas) {
          StateDistribution beta = beta0;
          double sum_expected = 0.0;
          for (long i = 1; i <= grid.lemma2_pulls; ++i) {
            const long tau_i = epoch_length(schedule, i - 1);
            sum_expected += expected_smoothed_reward(instance, j, beta, tau_i, gamma);
            beta = evolve(beta, instance.P[j], tau_i);
            const double lhs = std::abs(mu_j - sum_expected / static_cast<double>(i));
            const double rhs =
                L_bound(stats[j], schedule, gamma, i, branch) / static_cast<double>(i);
            std::ostringstream oss;
            oss << instance.id << " arm=" << j << " gamma=" << gamma << " tau0=" << schedule.tau0
                << " zeta=" << schedule.zeta << " T=" << i;
            record_check(report.lemma2, lhs, rhs, oss.str());
          }
        }
      }
    }
  }
  return report;
}

FillAuditReport audit_fill(int chains, int max_states, long n_max, std::uint64_t seed) {
  FillAuditReport report;
  report.fill.name = "geometric-convergence";
  for (int c = 0; c < chains; ++c) {
    const int states = 2 + static_cast<int>(mix64(seed, 1000 + c) % (max_states - 1));
    const TransitionMatrix P =
        sample_random_transition(RandomMatrixDistribution::Uniform, states, mix64(seed, c));
    const StateDistribution pi = stationary_distribution(P);
    const double lambda2 = lambda2_M(P);

    for (int corner = 0; corner < states; ++corner) {
      StateDistribution beta = StateDistribution::Zero(states);
      beta(corner) = 1.0;
      const double chi0 = chi_squared_distance(beta, pi);
      StateDistribution b = beta;
      for (long n = 1; n <= n_max; ++n) {
        b = evolve(b, P, 1);
        const double l1 = (b - pi).lpNorm<1>();
        // Below the propagation noise floor the distance is pure roundoff.
        if (l1 < 1e-13) break;
        const double tv = 0.5 * l1;
        const double lhs = tv * tv;
        const double rhs = fill_bound(chi0, lambda2, n);
        std::ostringstream oss;
        oss << "chain=" << c << " states=" << states << " corner=" << corner << " n=" << n;
        record_check(report.fill, lhs, rhs, oss.str(), 1e-22);
      }
    }
  }
  return report;
}

double select_c_prime_by_grid(const RunConfig& base_config, const std::vector<double>& candidates) {
  if (base_config.policy != PolicyId::EpochGreedy)
    throw std::invalid_argument("c_prime selection applies to the greedy epoch policy");
  if (!base_config.epochs) throw std::invalid_argument("c_prime selection requires an epoch horizon");

  const BoundInputs inputs = make_bound_inputs(base_config.instance, base_config.params.schedule,
                                               base_config.instance.gamma, *base_config.epochs);
  double best_c_prime = candidates.front();
  double best_regret = std::numeric_limits<double>::infinity();
  for (double c_prime : candidates) {
    const GreedyConfig config = theoretical_greedy_config(inputs, *base_config.epochs, c_prime);
    RunConfig run = base_config;
    run.params.c = config.c;
    run.params.c_prime = c_prime;
    const std::vector<RunTrace> traces = run_all(run);
    double mean_regret = 0.0;
    for (const RunTrace& t : traces) mean_regret += t.cum_regret;
    mean_regret /= traces.size();
    if (mean_regret < best_regret) {
      best_regret = mean_regret;
      best_c_prime = c_prime;
    }
  }
  return best_c_prime;
}

}  // namespace epochbandit
