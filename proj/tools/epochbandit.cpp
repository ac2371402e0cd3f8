#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "epochbandit/io.hpp"

namespace fs = std::filesystem;
using namespace epochbandit;

namespace {

struct InstanceFlags {
  std::string path;
  std::string builtin;
  double epsilon = 0.1;
  double gamma = 1.0;
  bool gamma_set = false;
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& flags) {
  auto* path = cmd->add_option("--instance", flags.path, "Instance JSON file");
  auto* builtin =
      cmd->add_option("--builtin", flags.builtin, "Builtin instance: example1 or penalty");
  path->excludes(builtin);
  cmd->add_option("--epsilon", flags.epsilon, "Builtin instance epsilon")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", flags.gamma, "Discount factor in (0, 1]")
      ->check(CLI::Range(1e-9, 1.0))
      ->each([&flags](const std::string&) { flags.gamma_set = true; });
}

ProblemInstance resolve_instance(const InstanceFlags& flags) {
  ProblemInstance inst;
  if (!flags.path.empty()) {
    inst = load_instance(flags.path);
  } else if (flags.builtin == "example1") {
    inst = example1(flags.epsilon);
  } else if (flags.builtin == "penalty") {
    inst = penalty_example(flags.epsilon);
  } else if (flags.builtin.empty()) {
    throw CLI::ValidationError("--instance or --builtin is required");
  } else {
    throw CLI::ValidationError("unknown builtin instance: " + flags.builtin);
  }
  if (flags.gamma_set) inst.gamma = flags.gamma;
  validate(inst);
  return inst;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

int cmd_stats(const InstanceFlags& flags, bool as_json) {
  const ProblemInstance inst = resolve_instance(flags);
  const InstanceStats stats = analyze(inst);

  nlohmann::json doc;
  doc["gamma"] = inst.gamma;
  doc["optimal_arm"] = stats.optimal_arm;
  doc["tied_optimum"] = stats.tied_optimum;
  nlohmann::json arms = nlohmann::json::array();
  for (int j = 0; j < inst.arms(); ++j) {
    const AssumptionReport report = check_assumptions(inst.P[j]);
    const ChainStats& c = stats.chains[j];
    nlohmann::json arm;
    arm["pi"] = std::vector<double>(c.pi.data(), c.pi.data() + c.pi.size());
    arm["lambda2M"] = c.lambda2M;
    arm["lambda"] = c.lambda;
    arm["C"] = c.C;
    arm["mu"] = stats.mus[j];
    arm["delta"] = stats.gaps[j];
    arm["assumptions"] = {{"irreducible", report.irreducible},
                          {"aperiodic", report.aperiodic},
                          {"M_irreducible", report.m_irreducible}};
    arms.push_back(arm);
  }
  doc["arms"] = arms;

  if (as_json) {
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "gamma = " << inst.gamma << ", optimal arm = " << stats.optimal_arm
            << (stats.tied_optimum ? " (tied)" : "") << "\n";
  for (int j = 0; j < inst.arms(); ++j) {
    const ChainStats& c = stats.chains[j];
    std::cout << "arm " << j << ": mu=" << stats.mus[j] << " delta=" << stats.gaps[j]
              << " lambda2M=" << c.lambda2M << " lambda=" << c.lambda << " C=" << c.C << " pi=[";
    for (int s = 0; s < c.pi.size(); ++s) std::cout << (s ? " " : "") << c.pi(s);
    std::cout << "]\n";
  }
  return 0;
}

int cmd_bounds(const InstanceFlags& flags, long tau0, long zeta, long horizon,
               const std::string& policy, const std::string& out_path,
               const std::vector<double>& gamma_grid) {
  const ProblemInstance base = resolve_instance(flags);
  std::vector<double> gammas = gamma_grid;
  if (gammas.empty()) gammas.push_back(base.gamma);

  const EpochSchedule schedule(tau0, zeta);
  for (double gamma : gammas) {
    const BoundInputs inputs = make_bound_inputs(base, schedule, gamma, horizon);
    std::vector<BoundCurve> curves;

    for (int j = 0; j < inputs.arms(); ++j) {
      BoundCurve lc{BoundCurve::Kind::L, j, {}};
      for (long n = 1; n <= horizon; n = std::max(n + 1, n + horizon / 200))
        lc.points.emplace_back(n, L_bound(inputs.stats[j], schedule, gamma, n, inputs.branch));
      curves.push_back(std::move(lc));
    }

    if (policy == "epochucb" || policy == "all") {
      BoundCurve c1{BoundCurve::Kind::RegretCor1, -1, {}};
      BoundCurve c2{BoundCurve::Kind::RegretCor2, -1, {}};
      for (long n = 1; n <= horizon; n = std::max(n + 1, n + horizon / 200)) {
        c1.points.emplace_back(n, cor1_regret_bound(inputs, n));
        c2.points.emplace_back(n, cor2_regret_bound(inputs, n));
      }
      curves.push_back(std::move(c1));
      curves.push_back(std::move(c2));
      for (int j = 0; j < inputs.arms(); ++j) {
        if (j == inputs.optimal_arm || inputs.gaps[j] <= 0.0) continue;
        BoundCurve tc{BoundCurve::Kind::Thm1Plays, j, {}};
        const double rho_j = rho(inputs.stats[j], schedule, gamma, inputs.branch);
        for (long n = 1; n <= horizon; n = std::max(n + 1, n + horizon / 200))
          tc.points.emplace_back(n, thm1_plays_bound(inputs.gaps[j], rho_j, n));
        curves.push_back(std::move(tc));
      }
    }
    if (policy == "epochgreedy" || policy == "all") {
      const GreedyConfig config = theoretical_greedy_config(inputs, horizon);
      BoundCurve c3{BoundCurve::Kind::RegretCor3, -1, {}};
      for (long n = 1; n <= horizon; n = std::max(n + 1, n + horizon / 200))
        c3.points.emplace_back(n, cor3_regret_bound(config, inputs, n));
      curves.push_back(std::move(c3));
      BoundCurve tp{BoundCurve::Kind::Thm2Prob, -1, {}};
      const long k0 = thm2_validity_threshold(config, inputs.arms());
      for (long k = k0; k <= horizon; k = std::max(k + 1, k + horizon / 200))
        tp.points.emplace_back(k, thm2_prob_bound(config, inputs.arms(), k));
      curves.push_back(std::move(tp));
    }

    fs::path path = out_path;
    if (gammas.size() > 1) {
      path = out_path;
      path.replace_extension("");
      path += ".gamma" + format_double(gamma) + ".csv";
    }
    if (out_path == "-") {
      write_bound_curves_csv(std::cout, curves);
    } else {
      auto out = open_output(path);
      write_bound_curves_csv(out, curves);
    }
  }
  return 0;
}

int simulate_run(const RunFile& run) {
  fs::create_directories(run.csv_dir);
  std::vector<PlotSeries> series;

  for (const PolicySpec& spec : run.policies) {
    RunConfig config;
    config.instance = run.instance;
    config.policy = spec.id;
    config.params = spec.params;
    config.epochs = run.epochs;
    config.iterations = run.iterations;
    config.replications = run.replications;
    config.master_seed = run.master_seed;
    if (!is_epoch_policy(spec.id) && !config.iterations)
      throw std::invalid_argument(std::string(policy_name(spec.id)) +
                                  " needs an iteration budget (--iters)");

    const std::vector<RunTrace> traces = run_all(config);

    auto trace_out = open_output(run.csv_dir / (std::string("trace_") + policy_name(spec.id) + ".csv"));
    write_trace_csv(trace_out, run.instance.id.empty() ? "instance" : run.instance.id, traces);

    AggregateCurve curve;
    if (run.iterations) {
      curve = iteration_regret_projection(traces, *run.iterations);
    } else {
      curve = epoch_regret_curve(traces);
    }
    auto agg_out = open_output(run.csv_dir / (std::string("aggregate_") + policy_name(spec.id) + ".csv"));
    write_aggregate_csv(agg_out, policy_name(spec.id), curve);

    PlotSeries s;
    s.label = policy_name(spec.id);
    s.x = curve.x;
    s.y = curve.mean;
    s.band = curve.stderr_;
    series.push_back(std::move(s));
  }

  if (run.svg) {
    PlotOptions options;
    options.title = run.instance.id;
    options.x_label = run.iterations ? "iterations" : "epochs";
    auto out = open_output(run.csv_dir / "regret.svg");
    out << render_svg_plot(series, options);
  }
  return 0;
}

int cmd_generate(const GeneratorSpec& spec, const std::string& out_path) {
  const ProblemInstance inst = generate(spec);
  save_instance(inst, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_spectrum(const std::string& dist_name, int states, int samples, std::uint64_t seed,
                 const std::string& out_path) {
  RandomMatrixDistribution dist;
  if (dist_name == "uniform")
    dist = RandomMatrixDistribution::Uniform;
  else if (dist_name == "absnormal")
    dist = RandomMatrixDistribution::AbsNormal;
  else
    throw CLI::ValidationError("--dist must be uniform or absnormal");

  const std::vector<SpectrumSample> samples_out = spectrum_samples(dist, states, samples, seed);
  if (!out_path.empty()) {
    auto out = open_output(out_path);
    write_spectrum_csv(out, samples_out);
  }

  std::vector<double> lambdas;
  lambdas.reserve(samples_out.size());
  for (const SpectrumSample& s : samples_out) lambdas.push_back(s.lambda);
  std::sort(lambdas.begin(), lambdas.end());
  double mean = 0.0;
  for (double v : lambdas) mean += v;
  mean /= lambdas.size();
  const double p95 = lambdas[static_cast<size_t>(0.95 * (lambdas.size() - 1))];
  std::cout << "dist=" << dist_name << " states=" << states << " samples=" << samples
            << " mean_lambda=" << mean << " p95_lambda=" << p95 << "\n";
  return 0;
}

int cmd_audit(const InstanceFlags& flags, long grid_tau, const std::vector<double>& grid_gamma,
              int fill_chains, std::uint64_t seed, const std::string& out_path) {
  const ProblemInstance inst = resolve_instance(flags);
  AuditGrid grid;
  if (grid_tau > 0) grid.tau_max = grid_tau;
  if (!grid_gamma.empty()) grid.gammas = grid_gamma;

  const AuditReport inequalities = audit_inequalities(inst, grid);
  const FillAuditReport fill = audit_fill(fill_chains, 6, 50, seed);
  const std::string report = audit_report_to_json(inequalities, fill);
  if (out_path.empty() || out_path == "-") {
    std::cout << report << "\n";
  } else {
    auto out = open_output(out_path);
    out << report << "\n";
    std::cout << (inequalities.ok() && fill.ok() ? "audit passed" : "audit FAILED") << ", report at "
              << out_path << "\n";
  }
  return (inequalities.ok() && fill.ok()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit laboratory for correlated Markovian environments with smoothed rewards"};
  app.require_subcommand(1);

  int exit_code = 0;

  // stats
  auto* stats = app.add_subcommand("stats", "Per-arm chain statistics and assumption checks");
  InstanceFlags stats_flags;
  add_instance_flags(stats, stats_flags);
  bool stats_json = false;
  stats->add_flag("--json", stats_json, "Machine-readable output");
  stats->callback([&]() { exit_code = cmd_stats(stats_flags, stats_json); });

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Closed-form bound curves as CSV");
  InstanceFlags bounds_flags;
  add_instance_flags(bounds, bounds_flags);
  long b_tau0 = 1, b_zeta = 1, b_horizon = 1000;
  std::string b_policy = "all", b_out = "-";
  std::vector<double> b_gamma_grid;
  bounds->add_option("--tau0", b_tau0)->check(CLI::PositiveNumber);
  bounds->add_option("--zeta", b_zeta)->check(CLI::PositiveNumber);
  bounds->add_option("--horizon", b_horizon)->check(CLI::PositiveNumber);
  bounds->add_option("--policy", b_policy, "epochucb, epochgreedy, or all");
  bounds->add_option("--out", b_out, "Output CSV path, - for stdout");
  bounds->add_option("--grid-gamma", b_gamma_grid, "Sweep of discount factors");
  bounds->callback([&]() {
    exit_code = cmd_bounds(bounds_flags, b_tau0, b_zeta, b_horizon, b_policy, b_out, b_gamma_grid);
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Seeded Monte-Carlo policy runs");
  InstanceFlags sim_flags;
  add_instance_flags(simulate, sim_flags);
  std::string sim_run_file;
  std::vector<std::string> sim_policies;
  long sim_horizon = 0, sim_iters = 0, sim_tau0 = 1, sim_zeta = 1;
  int sim_reps = 1;
  std::uint64_t sim_seed = 0;
  std::string sim_out = "out";
  bool sim_svg = false;
  simulate->add_option("--run", sim_run_file, "Run file (JSON); overrides the other flags");
  simulate->add_option("--policy", sim_policies, "Policy id, repeatable");
  simulate->add_option("--horizon", sim_horizon, "Epoch horizon n");
  simulate->add_option("--iters", sim_iters, "Total iteration budget");
  simulate->add_option("--tau0", sim_tau0)->check(CLI::PositiveNumber);
  simulate->add_option("--zeta", sim_zeta, "Epoch growth; 0 is the non-conforming constant-epoch demo")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--reps", sim_reps)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "Master seed");
  simulate->add_option("--out", sim_out, "Output directory");
  simulate->add_flag("--svg", sim_svg, "Write a regret plot");
  simulate->callback([&]() {
    RunFile run;
    if (!sim_run_file.empty()) {
      run = parse_run_file(sim_run_file);
    } else {
      run.instance = resolve_instance(sim_flags);
      if (sim_policies.empty()) throw CLI::ValidationError("--policy is required");
      for (const std::string& name : sim_policies) {
        const auto id = parse_policy(name);
        if (!id) throw CLI::ValidationError("unknown policy: " + name);
        PolicySpec spec;
        spec.id = *id;
        spec.params.schedule =
            (sim_zeta == 0) ? EpochSchedule::constant_epochs(sim_tau0) : EpochSchedule(sim_tau0, sim_zeta);
        run.policies.push_back(spec);
      }
      if (sim_horizon > 0) run.epochs = sim_horizon;
      if (sim_iters > 0) run.iterations = sim_iters;
      if (!run.epochs && !run.iterations)
        throw CLI::ValidationError("--horizon or --iters is required");
      run.replications = sim_reps;
      run.master_seed = sim_seed;
      run.csv_dir = sim_out;
      run.svg = sim_svg;
    }
    exit_code = simulate_run(run);
  });

  // generate
  auto* gen = app.add_subcommand("generate", "Random anti-correlated instance to JSON");
  GeneratorSpec gen_spec;
  std::string gen_out = "instance.json";
  gen->add_option("--m", gen_spec.m)->check(CLI::Range(2, 64));
  gen->add_option("--states", gen_spec.states)->check(CLI::Range(2, 64));
  gen->add_option("--seed", gen_spec.seed);
  gen->add_option("--mass", gen_spec.anti_correlation_mass, "Favored-subset mass of the optimal arm")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--gamma", gen_spec.gamma)->check(CLI::Range(1e-9, 1.0));
  gen->add_option("--out", gen_out);
  gen->callback([&]() { exit_code = cmd_generate(gen_spec, gen_out); });

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Mixing-rate statistics of random chains");
  std::string sp_dist = "uniform", sp_out;
  int sp_states = 10, sp_samples = 1000;
  std::uint64_t sp_seed = 0;
  spectrum->add_option("--dist", sp_dist, "uniform or absnormal");
  spectrum->add_option("--states", sp_states)->check(CLI::Range(2, 64));
  spectrum->add_option("--samples", sp_samples)->check(CLI::PositiveNumber);
  spectrum->add_option("--seed", sp_seed);
  spectrum->add_option("--out", sp_out, "CSV of per-sample values");
  spectrum->callback(
      [&]() { exit_code = cmd_spectrum(sp_dist, sp_states, sp_samples, sp_seed, sp_out); });

  // audit
  auto* audit = app.add_subcommand("audit", "Deterministic inequality audits");
  InstanceFlags audit_flags;
  add_instance_flags(audit, audit_flags);
  long audit_tau = 0;
  std::vector<double> audit_gamma;
  int audit_chains = 200;
  std::uint64_t audit_seed = 12345;
  std::string audit_out;
  audit->add_option("--grid-tau", audit_tau, "Largest epoch length in the grid");
  audit->add_option("--grid-gamma", audit_gamma, "Discount factors in the grid");
  audit->add_option("--fill-chains", audit_chains, "Random chains for the convergence audit");
  audit->add_option("--seed", audit_seed);
  audit->add_option("--out", audit_out, "Report JSON path");
  audit->callback([&]() {
    exit_code = cmd_audit(audit_flags, audit_tau, audit_gamma, audit_chains, audit_seed, audit_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
