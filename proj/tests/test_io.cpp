#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "epochbandit/io.hpp"

using namespace epochbandit;

TEST_CASE("instance files round-trip exactly") {
  const ProblemInstance original = generate({.m = 3, .states = 5, .seed = 123});
  const std::string text = instance_to_json(original);
  const ProblemInstance loaded = instance_from_json(text);

  CHECK(loaded.arms() == original.arms());
  CHECK(loaded.states() == original.states());
  CHECK(loaded.gamma == original.gamma);
  for (int j = 0; j < original.arms(); ++j) {
    for (int r = 0; r < original.states(); ++r)
      for (int c = 0; c < original.states(); ++c)
        CHECK(loaded.P[j](r, c) == original.P[j](r, c));  // bitwise
    for (int s = 0; s < original.states(); ++s) {
      CHECK(loaded.kernels[j][s].family() == original.kernels[j][s].family());
      CHECK(loaded.kernels[j][s].param0() == original.kernels[j][s].param0());
      CHECK(loaded.kernels[j][s].param1() == original.kernels[j][s].param1());
    }
  }
  // A second round trip reproduces the byte stream.
  CHECK(instance_to_json(loaded) == text);
}

TEST_CASE("loading re-checks chain invariants") {
  const std::string reducible = R"({
    "version": "1", "m": 1, "states": 2, "gamma": 1.0,
    "beta1": [1.0, 0.0],
    "arms": [{"P": [[1.0, 0.0], [0.0, 1.0]],
              "kernels": [{"type": "bernoulli", "params": [0.2]},
                          {"type": "bernoulli", "params": [0.8]}]}]
  })";
  CHECK_THROWS_AS(instance_from_json(reducible), NonErgodicChain);

  const std::string bad_rows = R"({
    "version": "1", "m": 1, "states": 2, "gamma": 1.0,
    "beta1": [1.0, 0.0],
    "arms": [{"P": [[0.5, 0.6], [0.5, 0.5]],
              "kernels": [{"type": "bernoulli", "params": [0.2]},
                          {"type": "bernoulli", "params": [0.8]}]}]
  })";
  CHECK_THROWS_AS(instance_from_json(bad_rows), std::invalid_argument);
}

TEST_CASE("csv formatting is deterministic") {
  RunConfig config;
  config.instance = example1(0.1);
  config.policy = PolicyId::EpochGreedy;
  config.epochs = 40;
  config.replications = 3;
  config.master_seed = 31;
  const auto traces = run_all(config);

  std::ostringstream a, b;
  write_trace_csv(a, "example1", traces);
  write_trace_csv(b, "example1", traces);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("policy,instance_id,seed,k_or_t,arm,reward,cum_regret") == 0);
}

TEST_CASE("run files parse") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "epochbandit_io_test";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "run.json");
    out << R"({
      "instance": {"builtin": "example1", "epsilon": 0.05},
      "policies": [
        {"id": "epochucb", "params": {"tau0": 2, "zeta": 3}},
        {"id": "exp3"}
      ],
      "horizon": {"iterations": 5000},
      "replications": 4,
      "master_seed": 17,
      "outputs": {"csv_dir": "out", "svg": true}
    })";
  }
  const RunFile run = parse_run_file(dir / "run.json");
  CHECK(run.policies.size() == 2);
  CHECK(run.policies[0].id == PolicyId::EpochUcb);
  CHECK(run.policies[0].params.schedule.tau0 == 2);
  CHECK(run.policies[0].params.schedule.zeta == 3);
  CHECK(run.policies[1].id == PolicyId::Exp3);
  CHECK(run.iterations == 5000);
  CHECK(run.replications == 4);
  CHECK(run.master_seed == 17);
  CHECK(run.svg);
  CHECK_THROWS(parse_run_file(dir / "missing.json"));
  fs::remove_all(dir);
}

TEST_CASE("svg plots render") {
  PlotSeries s;
  s.label = "policy";
  for (int i = 1; i <= 50; ++i) {
    s.x.push_back(i);
    s.y.push_back(std::log(1.0 + i));
    s.band.push_back(0.05);
  }
  PlotOptions options;
  options.title = "regret";
  const std::string svg = render_svg_plot({s}, options);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("polygon") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  options.log_x = true;
  const std::string logsvg = render_svg_plot({s}, options);
  CHECK(logsvg.find("1e") != std::string::npos);
}

TEST_CASE("audit report serialization") {
  const auto inequalities = audit_inequalities(example1(0.1), [] {
    AuditGrid g;
    g.tau_max = 5;
    g.lemma2_pulls = 5;
    g.gammas = {1.0};
    g.schedules = {EpochSchedule(1, 1)};
    return g;
  }());
  const auto fill = audit_fill(5, 4, 10, 1);
  const std::string json = audit_report_to_json(inequalities, fill);
  CHECK(json.find("\"lemma1\"") != std::string::npos);
  CHECK(json.find("\"violations\": 0") != std::string::npos);
  CHECK(json.find("\"ok\": true") != std::string::npos);
}
