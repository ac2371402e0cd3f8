#include "epochbandit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace epochbandit {

using nlohmann::json;

namespace {

json kernel_to_json(const RewardKernel& kernel) {
  json k;
  k["type"] = kernel.family_name();
  switch (kernel.family()) {
    case RewardKernel::Family::Bernoulli:
      k["params"] = {kernel.param0()};
      break;
    default:
      k["params"] = {kernel.param0(), kernel.param1()};
  }
  return k;
}

RewardKernel kernel_from_json(const json& k) {
  const std::string type = k.at("type").get<std::string>();
  const std::vector<double> params = k.at("params").get<std::vector<double>>();
  if (type == "bernoulli") {
    if (params.size() != 1) throw std::invalid_argument("bernoulli kernel takes one parameter");
    return RewardKernel::bernoulli(params[0]);
  }
  if (type == "beta") {
    if (params.size() != 2) throw std::invalid_argument("beta kernel takes two parameters");
    return RewardKernel::beta(params[0], params[1]);
  }
  if (type == "uniform") {
    if (params.size() != 2) throw std::invalid_argument("uniform kernel takes two parameters");
    return RewardKernel::uniform(params[0], params[1]);
  }
  throw std::invalid_argument("unknown kernel type: " + type);
}

}  // namespace

std::string instance_to_json(const ProblemInstance& instance) {
  json doc;
  doc["version"] = "1";
  doc["m"] = instance.arms();
  doc["states"] = instance.states();
  doc["gamma"] = instance.gamma;
  doc["beta1"] = std::vector<double>(instance.beta1.data(),
                                     instance.beta1.data() + instance.beta1.size());
  json arms = json::array();
  for (int j = 0; j < instance.arms(); ++j) {
    json arm;
    json rows = json::array();
    for (int r = 0; r < instance.states(); ++r) {
      json row = json::array();
      for (int c = 0; c < instance.states(); ++c) row.push_back(instance.P[j](r, c));
      rows.push_back(row);
    }
    arm["P"] = rows;
    json kernels = json::array();
    for (const RewardKernel& k : instance.kernels[j]) kernels.push_back(kernel_to_json(k));
    arm["kernels"] = kernels;
    arms.push_back(arm);
  }
  doc["arms"] = arms;
  if (!instance.id.empty()) doc["id"] = instance.id;
  return doc.dump(2);
}

ProblemInstance instance_from_json(const std::string& text) {
  const json doc = json::parse(text);
  if (doc.at("version").get<std::string>() != "1")
    throw std::invalid_argument("unsupported instance file version");
  const int m = doc.at("m").get<int>();
  const int s = doc.at("states").get<int>();

  ProblemInstance instance;
  instance.gamma = doc.at("gamma").get<double>();
  const std::vector<double> beta1 = doc.at("beta1").get<std::vector<double>>();
  if (static_cast<int>(beta1.size()) != s)
    throw std::invalid_argument("beta1 size does not match the state count");
  instance.beta1 = Eigen::Map<const Eigen::VectorXd>(beta1.data(), s);

  const json& arms = doc.at("arms");
  if (static_cast<int>(arms.size()) != m)
    throw std::invalid_argument("arm count does not match m");
  for (const json& arm : arms) {
    TransitionMatrix P(s, s);
    const json& rows = arm.at("P");
    if (static_cast<int>(rows.size()) != s) throw std::invalid_argument("bad transition row count");
    for (int r = 0; r < s; ++r) {
      const std::vector<double> row = rows[r].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != s) throw std::invalid_argument("bad transition row size");
      for (int c = 0; c < s; ++c) P(r, c) = row[c];
    }
    instance.P.push_back(P);
    std::vector<RewardKernel> kernels;
    for (const json& k : arm.at("kernels")) kernels.push_back(kernel_from_json(k));
    if (static_cast<int>(kernels.size()) != s)
      throw std::invalid_argument("kernel count does not match the state count");
    instance.kernels.push_back(std::move(kernels));
  }
  if (doc.contains("id")) instance.id = doc["id"].get<std::string>();
  validate(instance);
  return instance;
}

void save_instance(const ProblemInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << instance_to_json(instance) << "\n";
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

namespace {

PolicyParams params_from_json(const json& p) {
  PolicyParams params;
  long tau0 = p.value("tau0", 1L);
  long zeta = p.value("zeta", 1L);
  params.schedule = (zeta == 0) ? EpochSchedule::constant_epochs(tau0) : EpochSchedule(tau0, zeta);
  if (p.contains("c")) params.c = p["c"].get<double>();
  if (p.contains("d")) params.d = p["d"].get<double>();
  params.c_prime = p.value("c_prime", 8.1);
  params.gamma_rl = p.value("gamma_rl", 0.9);
  params.trajectory_sampling = p.value("trajectory_sampling", false);
  return params;
}

}  // namespace

RunFile parse_run_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run file " + path.string());
  json doc;
  in >> doc;

  RunFile run;
  const json& inst = doc.at("instance");
  if (inst.is_string()) {
    std::filesystem::path p = inst.get<std::string>();
    if (p.is_relative()) p = path.parent_path() / p;
    run.instance = load_instance(p);
  } else if (inst.contains("builtin")) {
    const std::string name = inst["builtin"].get<std::string>();
    const double epsilon = inst.value("epsilon", 0.1);
    const double gamma = inst.value("gamma", 1.0);
    if (name == "example1")
      run.instance = example1(epsilon, gamma);
    else if (name == "penalty")
      run.instance = penalty_example(epsilon, gamma);
    else
      throw std::invalid_argument("unknown builtin instance: " + name);
  } else if (inst.contains("generator")) {
    const json& g = inst["generator"];
    GeneratorSpec spec;
    spec.m = g.value("m", 4);
    spec.states = g.value("states", 4);
    spec.seed = g.value("seed", 0ULL);
    spec.anti_correlation_mass = g.value("anti_correlation_mass", 0.95);
    spec.gamma = g.value("gamma", 1.0);
    run.instance = generate(spec);
  } else {
    throw std::invalid_argument("run file instance must be a path, builtin, or generator spec");
  }
  if (doc.contains("gamma")) run.instance.gamma = doc["gamma"].get<double>();

  for (const json& p : doc.at("policies")) {
    PolicySpec spec;
    const std::string id = p.at("id").get<std::string>();
    const auto parsed = parse_policy(id);
    if (!parsed) throw std::invalid_argument("unknown policy id: " + id);
    spec.id = *parsed;
    spec.params = params_from_json(p.value("params", json::object()));
    run.policies.push_back(spec);
  }

  const json& horizon = doc.at("horizon");
  if (horizon.contains("epochs")) run.epochs = horizon["epochs"].get<long>();
  if (horizon.contains("iterations")) run.iterations = horizon["iterations"].get<long>();
  if (!run.epochs && !run.iterations)
    throw std::invalid_argument("horizon must set epochs or iterations");

  run.replications = doc.value("replications", 1);
  run.master_seed = doc.value("master_seed", 0ULL);
  if (doc.contains("outputs")) {
    const json& out = doc["outputs"];
    run.csv_dir = out.value("csv_dir", std::string("."));
    run.svg = out.value("svg", false);
  }
  return run;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const std::string& instance_id,
                     const std::vector<RunTrace>& traces) {
  out << "policy,instance_id,seed,k_or_t,arm,reward,cum_regret\n";
  for (const RunTrace& trace : traces) {
    double cum = 0.0;
    for (const EpochRecord& rec : trace.records) {
      cum += rec.regret_increment;
      out << trace.policy << ',' << instance_id << ',' << trace.seed << ',' << rec.k << ','
          << rec.arm << ',' << format_double(rec.reward) << ',' << format_double(cum) << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& out, const std::string& policy,
                         const AggregateCurve& curve) {
  out << "policy,x,mean,stderr\n";
  for (size_t i = 0; i < curve.x.size(); ++i) {
    out << policy << ',' << format_double(curve.x[i]) << ',' << format_double(curve.mean[i]) << ','
        << format_double(curve.stderr_[i]) << '\n';
  }
}

void write_bound_curves_csv(std::ostream& out, const std::vector<BoundCurve>& curves) {
  out << "k,value,kind,arm\n";
  for (const BoundCurve& curve : curves) {
    for (const auto& [k, value] : curve.points) {
      out << k << ',' << format_double(value) << ',' << bound_curve_kind_name(curve.kind) << ','
          << curve.arm << '\n';
    }
  }
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumSample>& samples) {
  out << "sample,lambda2M,lambda\n";
  for (size_t i = 0; i < samples.size(); ++i) {
    out << i << ',' << format_double(samples[i].lambda2M) << ','
        << format_double(samples[i].lambda) << '\n';
  }
}

namespace {

json check_to_json(const AuditCheck& check) {
  json j;
  j["name"] = check.name;
  j["checks"] = check.checks;
  j["violations"] = check.violations;
  j["max_ratio"] = check.max_ratio;
  j["min_slack"] = check.min_slack;
  j["worst_input"] = check.worst_input;
  return j;
}

}  // namespace

std::string audit_report_to_json(const AuditReport& inequalities, const FillAuditReport& fill) {
  json doc;
  doc["lemma1"] = check_to_json(inequalities.lemma1);
  doc["lemma2"] = check_to_json(inequalities.lemma2);
  doc["fill"] = check_to_json(fill.fill);
  doc["ok"] = inequalities.ok() && fill.ok();
  return doc.dump(2);
}

// -- SVG ----------------------------------------------------------------------

namespace {

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#17becf"};

double nice_step(double range) {
  if (range <= 0.0) return 1.0;
  const double raw = range / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  if (norm < 1.5) return mag;
  if (norm < 3.5) return 2.0 * mag;
  if (norm < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string render_svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  const int W = options.width, H = options.height;
  const int ml = 70, mr = 20, mt = options.title.empty() ? 20 : 40, mb = 50;
  const double pw = W - ml - mr, ph = H - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = 0.0, ymax = -std::numeric_limits<double>::infinity();
  for (const PlotSeries& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double xv = options.log_x ? std::log10(std::max(s.x[i], 1e-300)) : s.x[i];
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      const double band = s.band.empty() ? 0.0 : s.band[i];
      ymin = std::min(ymin, s.y[i] - band);
      ymax = std::max(ymax, s.y[i] + band);
    }
  }
  if (!std::isfinite(xmin) || xmax <= xmin) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (ymax <= ymin) ymax = ymin + 1.0;
  ymax *= 1.05;

  auto px = [&](double x) {
    const double xv = options.log_x ? std::log10(std::max(x, 1e-300)) : x;
    return ml + (xv - xmin) / (xmax - xmin) * pw;
  };
  auto py = [&](double y) { return mt + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  if (!options.title.empty())
    svg << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">"
        << options.title << "</text>\n";

  // Axes with ticks.
  svg << "<g stroke=\"#333\" stroke-width=\"1\">\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\"/>\n</g>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const double ystep = nice_step(ymax - ymin);
  for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax; v += ystep) {
    svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << py(v) << "\" x2=\"" << ml << "\" y2=\""
        << py(v) << "\" stroke=\"#333\"/>"
        << "<text x=\"" << ml - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
        << fmt_tick(v) << "</text>\n";
  }
  if (options.log_x) {
    for (double e = std::ceil(xmin); e <= xmax; e += 1.0) {
      const double x = ml + (e - xmin) / (xmax - xmin) * pw;
      svg << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
          << mt + ph + 4 << "\" stroke=\"#333\"/>"
          << "<text x=\"" << x << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">1e"
          << fmt_tick(e) << "</text>\n";
    }
  } else {
    const double xstep = nice_step(xmax - xmin);
    for (double v = std::ceil(xmin / xstep) * xstep; v <= xmax; v += xstep) {
      const double x = ml + (v - xmin) / (xmax - xmin) * pw;
      svg << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
          << mt + ph + 4 << "\" stroke=\"#333\"/>"
          << "<text x=\"" << x << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
          << fmt_tick(v) << "</text>\n";
    }
  }
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 10
      << "\" text-anchor=\"middle\" font-size=\"12\">" << options.x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << mt + ph / 2
      << ")\">" << options.y_label << "</text>\n</g>\n";

  // Bands first, lines on top.
  for (size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const char* color = kSeriesColors[si % 7];
    if (!s.band.empty()) {
      svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (size_t i = 0; i < s.x.size(); ++i)
        svg << px(s.x[i]) << ',' << py(s.y[i] + s.band[i]) << ' ';
      for (size_t i = s.x.size(); i-- > 0;)
        svg << px(s.x[i]) << ',' << py(s.y[i] - s.band[i]) << ' ';
      svg << "\"/>\n";
    }
  }
  for (size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const char* color = kSeriesColors[si % 7];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    svg << "\"/>\n";
    const double ly = mt + 16 + 16 * static_cast<double>(si);
    svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 130
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
        << "<text x=\"" << ml + pw - 124 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace epochbandit
