// Acceptance suite: one runnable criterion per check, each printing a
// PASS/FAIL line with the measured values.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "epochbandit/io.hpp"
#include "oracles.hpp"

using namespace epochbandit;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;

bool report(int id, const std::string& name, bool pass, const std::string& details) {
  std::printf("criterion %02d %-34s %s  %s\n", id, name.c_str(), pass ? "PASS" : "FAIL",
              details.c_str());
  std::fflush(stdout);
  return pass;
}

struct Summary {
  double mean = 0.0;
  double p95 = 0.0;
};

Summary summarize_lambda(const std::vector<SpectrumSample>& samples) {
  std::vector<double> values;
  values.reserve(samples.size());
  for (const auto& s : samples) values.push_back(s.lambda);
  std::sort(values.begin(), values.end());
  Summary out;
  out.mean = oracles::mean_of(values);
  out.p95 = values[static_cast<size_t>(0.95 * (values.size() - 1))];
  return out;
}

// Criterion 1: spectral statistics of random 10-state chains.
bool criterion_spectrum() {
  const auto uniform = spectrum_samples(RandomMatrixDistribution::Uniform, 10, 1000, 20240601);
  const auto absnormal = spectrum_samples(RandomMatrixDistribution::AbsNormal, 10, 1000, 20240602);
  const Summary u = summarize_lambda(uniform);
  const Summary a = summarize_lambda(absnormal);
  const bool pass = 0.27 <= u.mean && u.mean <= 0.37 && 0.33 <= u.p95 && u.p95 <= 0.43 &&
                    0.60 <= a.mean && a.mean <= 0.80 && 0.76 <= a.p95 && a.p95 <= 0.90;
  std::ostringstream oss;
  oss << "uniform mean=" << u.mean << " p95=" << u.p95 << " | absnormal mean=" << a.mean
      << " p95=" << a.p95;
  return report(1, "spectral-statistics", pass, oss.str());
}

// Criterion 2: closed-form stationary distribution of the two-arm example.
bool criterion_stationary_closed_form() {
  bool pass = true;
  double worst = 0.0;
  for (double eps : {0.01, 0.1}) {
    const ProblemInstance inst = example1(eps);
    const auto pi = stationary_distribution(inst.P[0]);
    const double err = std::max(std::abs(pi(0) - eps / (1 + eps)), std::abs(pi(1) - 1 / (1 + eps)));
    worst = std::max(worst, err);
    pass = pass && err <= 1e-10;
  }
  std::ostringstream oss;
  oss << "max deviation " << worst;
  return report(2, "example-stationary-distribution", pass, oss.str());
}

std::vector<ProblemInstance> audit_instance_set() {
  std::vector<ProblemInstance> instances;
  instances.push_back(example1(0.01));
  instances.push_back(example1(0.1));
  instances.push_back(penalty_example(0.01));
  instances.push_back(penalty_example(0.1));
  for (int i = 0; i < 50; ++i) {
    GeneratorSpec spec;
    spec.m = 2 + i % 3;
    spec.states = 2 + i % 5;
    spec.seed = 1000 + i;
    instances.push_back(generate(spec));
  }
  return instances;
}

// Criterion 3: exact expected-reward convergence audit.
bool criterion_lemma1() {
  AuditGrid grid;
  grid.tau_max = 50;
  grid.gammas = {0.5, 0.9, 1.0};
  grid.lemma2_pulls = 0;
  long checks = 0, violations = 0;
  double worst_ratio = 0.0;
  for (const ProblemInstance& inst : audit_instance_set()) {
    const auto result = audit_inequalities(inst, grid);
    checks += result.lemma1.checks;
    violations += result.lemma1.violations;
    worst_ratio = std::max(worst_ratio, result.lemma1.max_ratio);
  }
  std::ostringstream oss;
  oss << checks << " checks, " << violations << " violations, max lhs/rhs " << worst_ratio;
  return report(3, "expected-reward-convergence", violations == 0 && checks > 10000, oss.str());
}

// Criterion 4: exact mean-reward convergence audit along pull schedules.
bool criterion_lemma2() {
  AuditGrid grid;
  grid.tau_max = 1;
  grid.gammas = {0.5, 0.9, 1.0};
  grid.schedules = {EpochSchedule(1, 1), EpochSchedule(40, 1)};
  grid.lemma2_pulls = 200;
  long checks = 0, violations = 0;
  double worst_ratio = 0.0;
  for (const ProblemInstance& inst : audit_instance_set()) {
    const auto result = audit_inequalities(inst, grid);
    checks += result.lemma2.checks;
    violations += result.lemma2.violations;
    worst_ratio = std::max(worst_ratio, result.lemma2.max_ratio);
  }
  std::ostringstream oss;
  oss << checks << " checks, " << violations << " violations, max lhs/rhs " << worst_ratio;
  return report(4, "mean-reward-convergence", violations == 0 && checks > 100000, oss.str());
}

// Criterion 5: geometric convergence of random ergodic chains.
bool criterion_fill() {
  const auto result = audit_fill(200, 6, 50, 987654);
  std::ostringstream oss;
  oss << result.fill.checks << " checks, " << result.fill.violations << " violations, max ratio "
      << result.fill.max_ratio;
  return report(5, "geometric-convergence", result.fill.violations == 0 && result.fill.checks > 5000,
                oss.str());
}

RunConfig example1_epoch_config(PolicyId policy, long epochs, int reps, std::uint64_t seed) {
  RunConfig config;
  config.instance = example1(0.1);
  config.policy = policy;
  config.params.schedule = EpochSchedule(1, 1);
  config.epochs = epochs;
  config.replications = reps;
  config.master_seed = seed;
  return config;
}

// Criterion 6: Monte-Carlo suboptimal plays against the closed-form bound.
bool criterion_plays_bound() {
  RunConfig config = example1_epoch_config(PolicyId::EpochUcb, 500, 100, 6001);
  const BoundInputs inputs =
      make_bound_inputs(config.instance, config.params.schedule, 1.0, 500);
  const double rho1 = rho(inputs.stats[1], inputs.schedule, 1.0, inputs.branch);
  const double bound = thm1_plays_bound(inputs.gaps[1], rho1, 500);
  const auto plays = estimate_suboptimal_plays(config);
  const double upper = plays.mean[1] + 3 * plays.stderr_[1];
  std::ostringstream oss;
  oss << "mean T2(500)=" << plays.mean[1] << " +3se=" << upper << " bound=" << bound;
  return report(6, "suboptimal-plays-bound", upper <= bound, oss.str());
}

// Criterion 7: empirical regret under the gap-dependent bound.
bool criterion_cor1_bound() {
  RunConfig config = example1_epoch_config(PolicyId::EpochUcb, 2000, 100, 7001);
  const auto traces = run_all(config);
  const auto curve = epoch_regret_curve(traces);
  bool pass = true;
  std::ostringstream oss;
  for (long n : {100L, 500L, 2000L}) {
    const BoundInputs inputs = make_bound_inputs(config.instance, config.params.schedule, 1.0, n);
    const double bound = cor1_regret_bound(inputs, n);
    const double upper = curve.mean[n - 1] + 3 * curve.stderr_[n - 1];
    pass = pass && upper <= bound;
    oss << "n=" << n << ": " << upper << " <= " << bound << "; ";
  }
  return report(7, "gap-dependent-regret-bound", pass, oss.str());
}

// Criterion 8: per-epoch suboptimal-selection frequency under the
// probability bound, for the conforming exploration constants.
bool criterion_thm2_bound() {
  RunConfig config = example1_epoch_config(PolicyId::EpochGreedy, 2000, 200, 8001);
  const BoundInputs inputs =
      make_bound_inputs(config.instance, config.params.schedule, 1.0, 2000);
  const GreedyConfig greedy = theoretical_greedy_config(inputs, 2000);
  config.params.c = greedy.c;
  config.params.c_prime = greedy.c_prime;
  config.params.d = greedy.d;

  const auto freq = suboptimal_selection_frequency(config);
  const long k0 = thm2_validity_threshold(greedy, 2);
  bool pass = k0 < 2000;
  long worst_k = 0;
  double worst_margin = 1e300;
  for (long k = k0; k <= 2000; ++k) {
    const double bound = std::min(1.0, thm2_prob_bound(greedy, 2, k));
    const double upper = freq.frequency[k - 1] + 3 * freq.stderr_[k - 1];
    const double margin = bound - upper;
    if (margin < worst_margin) {
      worst_margin = margin;
      worst_k = k;
    }
    if (upper > bound) pass = false;
  }
  std::ostringstream oss;
  oss << "validity k0=" << k0 << ", worst margin " << worst_margin << " at k=" << worst_k;
  return report(8, "selection-probability-bound", pass, oss.str());
}

// Criterion 9: linear regret of the iteration baselines on the trap
// example versus sublinear epoch policies.
bool criterion_trap_slopes() {
  const long budget = 100000;
  std::map<std::string, double> slopes;
  for (PolicyId policy : {PolicyId::Ucb1, PolicyId::EpsGreedy, PolicyId::EpochUcb, PolicyId::EpochGreedy}) {
    RunConfig config;
    config.instance = example1(0.001);
    config.policy = policy;
    config.params.schedule = EpochSchedule(1, 1);
    config.iterations = budget;
    config.replications = 20;
    config.master_seed = 1;
    config.record_stride = is_epoch_policy(policy) ? 1 : 10;
    const auto curve = iteration_regret_projection(run_all(config), budget);
    slopes[policy_name(policy)] = late_window_slope(curve);
  }
  const bool pass = slopes["ucb1"] >= 0.3 && slopes["epsgreedy"] >= 0.3 &&
                    slopes["epochucb"] <= 0.1 && slopes["epochgreedy"] <= 0.1;
  std::ostringstream oss;
  oss << "ucb1=" << slopes["ucb1"] << " epsgreedy=" << slopes["epsgreedy"]
      << " epochucb=" << slopes["epochucb"] << " epochgreedy=" << slopes["epochgreedy"];
  return report(9, "trap-example-slopes", pass, oss.str());
}

// The five benchmark instances: strongly confined favored arm, smallest
// gap at least 0.08; first five qualifying seeds counting from 1.
std::vector<ProblemInstance> benchmark_instances() {
  std::vector<ProblemInstance> instances;
  for (std::uint64_t seed = 1; instances.size() < 5 && seed <= 64; ++seed) {
    GeneratorSpec spec;
    spec.m = 4;
    spec.states = 4;
    spec.seed = seed;
    spec.anti_correlation_mass = 0.997;
    ProblemInstance inst;
    try {
      inst = generate(spec);
    } catch (const GenerationExhausted&) {
      continue;
    }
    if (analyze(inst).delta_min >= 0.08) instances.push_back(std::move(inst));
  }
  return instances;
}

// Criterion 10: the adversarial/variance-tuned/value-approximation
// baselines accrue regret at least three times as fast as the
// upper-confidence epoch policy on the benchmark instances.
bool criterion_baseline_comparison() {
  const auto instances = benchmark_instances();
  if (instances.size() != 5) return report(10, "baseline-comparison", false, "instance scan failed");
  const long budget = 200000;
  std::map<std::string, double> pooled;
  for (PolicyId policy : {PolicyId::EpochUcb, PolicyId::Exp3, PolicyId::UcbTuned, PolicyId::LinQ}) {
    double total = 0.0;
    for (const ProblemInstance& inst : instances) {
      RunConfig config;
      config.instance = inst;
      config.policy = policy;
      config.params.schedule = EpochSchedule(40, 1);
      config.iterations = budget;
      config.replications = 10;
      config.master_seed = 5;
      config.record_stride = is_epoch_policy(policy) ? 1 : 10;
      const auto curve = iteration_regret_projection(run_all(config), budget);
      total += late_window_slope(curve);
    }
    pooled[policy_name(policy)] = total / 5.0;
  }
  const double base = pooled["epochucb"];
  const bool pass = pooled["exp3"] >= 3 * base && pooled["ucbtuned"] >= 3 * base &&
                    pooled["linq"] >= 3 * base && pooled["exp3"] > 0 && pooled["ucbtuned"] > 0 &&
                    pooled["linq"] > 0;
  std::ostringstream oss;
  oss << "epochucb=" << base << " exp3=" << pooled["exp3"] << " ucbtuned=" << pooled["ucbtuned"]
      << " linq=" << pooled["linq"];
  return report(10, "baseline-comparison", pass, oss.str());
}

// Criterion 11: closed-form sums against brute force.
bool criterion_sum_oracles() {
  Rng rng(11011);
  double worst = 0.0;
  bool pass = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const long t0 = 1 + rng.uniform_int(60);
    const long z = 1 + rng.uniform_int(6);
    const long n = 1 + rng.uniform_int(400);
    const double exact = harmonic_sum_exact(t0, z, n);
    double brute = 0.0;
    for (long i = 1; i <= n; ++i) brute += 1.0 / double(t0 + z * (i - 1));
    worst = std::max(worst, std::abs(exact - brute));
    pass = pass && std::abs(exact - brute) <= 1e-10 && brute <= harmonic_bound(t0, z, n) + 1e-12;
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = rng.uniform(0, 10);
    const double d = rng.uniform(0, 5);
    const double r = rng.uniform(0, 0.99);
    const long n = 1 + rng.uniform_int(120);
    double brute = 0.0;
    for (long i = 1; i <= n; ++i) brute += std::pow(r, double(i - 1)) * (a + d * (i - 1));
    const double closed = arith_geo_sum(a, d, r, n);
    const double err = std::abs(closed - brute) / std::max(1.0, std::abs(brute));
    worst = std::max(worst, err);
    pass = pass && err <= 1e-10;
  }
  std::ostringstream oss;
  oss << "2000 parameterizations, worst deviation " << worst;
  return report(11, "closed-form-sum-oracles", pass, oss.str());
}

// Criterion 12: the gap-dependent bound and the empirical regret of the
// upper-confidence epoch policy fall (then saturate) as the discount factor
// decays, on the mean over the benchmark instances.
bool criterion_discount_sweep() {
  const auto instances = benchmark_instances();
  if (instances.size() != 5) return report(12, "discount-sweep", false, "instance scan failed");
  const std::vector<double> gammas{0.99, 0.9, 0.7, 0.5};
  const long horizon = 60;

  bool bound_monotone = true;
  for (const ProblemInstance& inst : instances) {
    double prev = 1e300;
    for (double gamma : gammas) {
      const BoundInputs inputs = make_bound_inputs(inst, EpochSchedule(40, 1), gamma, horizon);
      const double value = cor1_regret_bound(inputs, horizon);
      if (value > prev * (1 + 1e-9)) bound_monotone = false;
      prev = value;
    }
  }

  std::vector<double> mean_curve, se_curve;
  for (double gamma : gammas) {
    double total = 0.0, var = 0.0;
    for (const ProblemInstance& base : instances) {
      ProblemInstance inst = base;
      inst.gamma = gamma;
      RunConfig config;
      config.instance = inst;
      config.policy = PolicyId::EpochUcb;
      config.params.schedule = EpochSchedule(40, 1);
      config.epochs = horizon;
      config.replications = 30;
      config.master_seed = 3;
      const auto curve = epoch_regret_curve(run_all(config));
      total += curve.mean.back();
      var += curve.stderr_.back() * curve.stderr_.back();
    }
    mean_curve.push_back(total / 5.0);
    se_curve.push_back(std::sqrt(var) / 5.0);
  }

  int upticks = 0;
  bool empirical_ok = true;
  for (size_t i = 1; i < mean_curve.size(); ++i) {
    const double rise = mean_curve[i] - mean_curve[i - 1];
    if (rise > 0) {
      ++upticks;
      const double se = std::sqrt(se_curve[i] * se_curve[i] + se_curve[i - 1] * se_curve[i - 1]);
      if (rise > se) empirical_ok = false;
    }
  }
  if (upticks > 1) empirical_ok = false;

  std::ostringstream oss;
  oss << "bound monotone=" << (bound_monotone ? "yes" : "no") << ", empirical mean curve [";
  for (size_t i = 0; i < mean_curve.size(); ++i) oss << (i ? " " : "") << mean_curve[i];
  oss << "] upticks=" << upticks;
  return report(12, "discount-sweep", bound_monotone && empirical_ok, oss.str());
}

// Criterion 13: repeated simulate invocations produce byte-identical CSVs.
bool criterion_determinism() {
  if (g_cli_path.empty()) return report(13, "determinism", false, "--cli path not provided");
  const fs::path base = fs::temp_directory_path() / "epochbandit_acceptance_determinism";
  fs::remove_all(base);
  const fs::path a = base / "a";
  const fs::path b = base / "b";
  for (const fs::path& dir : {a, b}) {
    const std::string cmd = g_cli_path +
                            " simulate --builtin example1 --epsilon 0.1"
                            " --policy epochucb --policy epochgreedy --policy exp3"
                            " --iters 20000 --reps 3 --seed 424242 --out " +
                            dir.string() + " >/dev/null";
    if (std::system(cmd.c_str()) != 0) return report(13, "determinism", false, "simulate failed");
  }
  bool identical = true;
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path other = b / entry.path().filename();
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(other, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str() || sa.str().empty()) identical = false;
    ++compared;
  }
  std::ostringstream oss;
  oss << compared << " files compared byte-for-byte";
  fs::remove_all(base);
  return report(13, "determinism", identical && compared >= 4, oss.str());
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) criterion = std::atoi(argv[++i]);
    if (arg == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
  }

  const std::vector<std::function<bool()>> criteria{
      criterion_spectrum,        criterion_stationary_closed_form,
      criterion_lemma1,          criterion_lemma2,
      criterion_fill,            criterion_plays_bound,
      criterion_cor1_bound,      criterion_thm2_bound,
      criterion_trap_slopes,     criterion_baseline_comparison,
      criterion_sum_oracles,     criterion_discount_sweep,
      criterion_determinism,
  };

  bool all = true;
  if (criterion >= 1 && criterion <= static_cast<int>(criteria.size())) {
    all = criteria[criterion - 1]();
  } else {
    for (const auto& check : criteria) all = check() && all;
  }
  return all ? 0 : 1;
}
