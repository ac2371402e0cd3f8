#include "epochbandit/bounds.hpp"

#include <cmath>

namespace epochbandit {

namespace {

// phi^e for phi in (0, 1]; evaluated in log space so large exponents
// underflow cleanly to 0.
double geom_pow(double phi, double e) {
  if (phi <= 0.0) return (e == 0.0) ? 1.0 : 0.0;
  const double t = e * std::log(phi);
  if (t < -700.0) return 0.0;
  return std::exp(t);
}

void require_conforming(const EpochSchedule& schedule) {
  if (!schedule.conforming())
    throw std::invalid_argument("closed-form bounds require a growing epoch schedule (zeta >= 1)");
}

FeedbackBranch single_arm_branch(double gamma, double lambda) {
  if (gamma == 1.0) return FeedbackBranch::TimeAveraged;
  return (std::abs(gamma - lambda) > tol::branch_window) ? FeedbackBranch::DiscountDistinct
                                                         : FeedbackBranch::DiscountEqual;
}

}  // namespace

FeedbackBranch branch_for(double gamma, const std::vector<double>& lambdas) {
  if (gamma == 1.0) return FeedbackBranch::TimeAveraged;
  for (double lambda : lambdas)
    if (std::abs(gamma - lambda) <= tol::branch_window) return FeedbackBranch::DiscountEqual;
  return FeedbackBranch::DiscountDistinct;
}

double upsilon(const ChainStats& stats, double /*gamma*/, long tau, FeedbackBranch branch) {
  if (tau < 1) throw InvalidTau("upsilon requires tau >= 1");
  const double t = static_cast<double>(tau);
  switch (branch) {
    case FeedbackBranch::DiscountDistinct: {
      const double psi = stats.psi;
      return geom_pow(stats.phi, t - 1.0) * (1.0 - geom_pow(psi, t)) / (1.0 - psi);
    }
    case FeedbackBranch::DiscountEqual:
      return geom_pow(stats.phi, t - 1.0) * t;
    case FeedbackBranch::TimeAveraged:
      return (1.0 - geom_pow(stats.lambda, t)) / (1.0 - stats.lambda);
  }
  return 0.0;
}

double upsilon(const ChainStats& stats, double gamma, long tau) {
  return upsilon(stats, gamma, tau, single_arm_branch(gamma, stats.lambda));
}

double L_bound(const ChainStats& stats, const EpochSchedule& schedule, double /*gamma*/, long n,
               FeedbackBranch branch) {
  require_conforming(schedule);
  if (n < 1) throw std::invalid_argument("L requires n >= 1");
  const double C = stats.C;
  const double phi = stats.phi;
  const double tau0 = static_cast<double>(schedule.tau0);
  const double zeta = static_cast<double>(schedule.zeta);
  const double zn = zeta * static_cast<double>(n);
  switch (branch) {
    case FeedbackBranch::DiscountDistinct: {
      const double phi_zn = geom_pow(phi, zn);
      return C * (geom_pow(phi, tau0) / (phi - stats.eta)) * (1.0 - phi_zn) /
             (1.0 - geom_pow(phi, zeta));
    }
    case FeedbackBranch::DiscountEqual: {
      const double phi_z = geom_pow(phi, zeta);
      const double phi_zn = geom_pow(phi, zn);
      const double head = (tau0 - phi_zn * (tau0 + zn)) / (1.0 - phi_z);
      const double tail = zeta * phi_z * (1.0 - phi_zn) / ((1.0 - phi_z) * (1.0 - phi_z));
      return C * geom_pow(phi, tau0 - 1.0) * (head + tail);
    }
    case FeedbackBranch::TimeAveraged:
      return C / (1.0 - stats.lambda) *
             (1.0 / tau0 + std::log(1.0 + zn / tau0) / zeta);
  }
  return 0.0;
}

double L_bound(const ChainStats& stats, const EpochSchedule& schedule, double gamma, long n) {
  return L_bound(stats, schedule, gamma, n, single_arm_branch(gamma, stats.lambda));
}

double rho(const ChainStats& stats, const EpochSchedule& schedule, double /*gamma*/,
           FeedbackBranch branch) {
  require_conforming(schedule);
  const double C = stats.C;
  const double phi = stats.phi;
  const double tau0 = static_cast<double>(schedule.tau0);
  const double zeta = static_cast<double>(schedule.zeta);
  switch (branch) {
    case FeedbackBranch::DiscountDistinct:
      return C * (geom_pow(phi, tau0) / (phi - stats.eta)) / (1.0 - geom_pow(phi, zeta));
    case FeedbackBranch::DiscountEqual: {
      const double phi_z = geom_pow(phi, zeta);
      return C * geom_pow(phi, tau0 - 1.0) *
             (tau0 / (1.0 - phi_z) + zeta * phi_z / ((1.0 - phi_z) * (1.0 - phi_z)));
    }
    case FeedbackBranch::TimeAveraged:
      return C / (std::sqrt(zeta * tau0) * (1.0 - stats.lambda)) * (1.0 + zeta / tau0);
  }
  return 0.0;
}

double rho(const ChainStats& stats, const EpochSchedule& schedule, double gamma) {
  return rho(stats, schedule, gamma, single_arm_branch(gamma, stats.lambda));
}

BoundInputs make_bound_inputs(const ProblemInstance& instance, const EpochSchedule& schedule,
                              double gamma, long horizon) {
  const InstanceStats istats = analyze(instance, gamma);
  BoundInputs inputs;
  inputs.stats = istats.chains;
  inputs.schedule = schedule;
  inputs.gamma = gamma;
  inputs.horizon = horizon;
  inputs.gaps = istats.gaps;
  inputs.optimal_arm = istats.optimal_arm;
  inputs.delta_min = istats.delta_min;
  std::vector<double> lambdas;
  lambdas.reserve(inputs.stats.size());
  for (const ChainStats& s : inputs.stats) lambdas.push_back(s.lambda);
  inputs.branch = branch_for(gamma, lambdas);
  return inputs;
}

BoundEvaluator l_evaluator(const BoundInputs& inputs) {
  return [inputs](int arm, long pulls) {
    return L_bound(inputs.stats[arm], inputs.schedule, inputs.gamma, pulls, inputs.branch);
  };
}

double thm1_plays_bound(double delta, double rho_value, long n) {
  if (!(delta > 0.0)) throw ZeroGap("the plays bound is undefined for a zero gap");
  if (n < 1) throw std::invalid_argument("horizon must be >= 1");
  const double logn = std::log(static_cast<double>(n));
  const double core = rho_value + std::sqrt(6.0 * logn);
  return 4.0 / (delta * delta) * core * core + 3.0 + 2.0 * logn;
}

double distinguishing_value(double delta, double rho_value, long n) {
  if (!(delta > 0.0)) throw ZeroGap("the distinguishing threshold is undefined for a zero gap");
  if (n < 1) throw std::invalid_argument("horizon must be >= 1");
  const double core = rho_value + std::sqrt(6.0 * std::log(static_cast<double>(n)));
  return 4.0 / (delta * delta) * core * core;
}

long distinguishing_threshold(double delta, double rho_value, long n) {
  const long value = static_cast<long>(std::ceil(distinguishing_value(delta, rho_value, n)));
  return std::max<long>(1, value);
}

double cor1_regret_bound(const BoundInputs& inputs, long n) {
  const double logn = std::log(static_cast<double>(n));
  double total = 0.0;
  for (int j = 0; j < inputs.arms(); ++j) {
    total += L_bound(inputs.stats[j], inputs.schedule, inputs.gamma, n, inputs.branch);
    if (j == inputs.optimal_arm || inputs.gaps[j] <= 0.0) continue;
    const double delta = inputs.gaps[j];
    const double core =
        rho(inputs.stats[j], inputs.schedule, inputs.gamma, inputs.branch) + std::sqrt(6.0 * logn);
    total += 4.0 / delta * core * core + 3.0 * delta + 2.0 * delta * logn;
  }
  return total;
}

double cor2_regret_bound(const BoundInputs& inputs, long n, bool appendix_constant) {
  const double logn = std::log(static_cast<double>(n));
  const double trailing = appendix_constant ? 3.0 : 2.0;
  double inner = 0.0;
  double penalty = 0.0;
  for (int j = 0; j < inputs.arms(); ++j) {
    const double r = rho(inputs.stats[j], inputs.schedule, inputs.gamma, inputs.branch);
    inner += 4.0 * r * r + 8.0 * r * std::sqrt(6.0 * logn) + 26.0 * logn + trailing;
    penalty += L_bound(inputs.stats[j], inputs.schedule, inputs.gamma, n, inputs.branch);
  }
  return std::sqrt(static_cast<double>(n) * inner) + penalty;
}

long thm2_validity_threshold(const GreedyConfig& config, int m) {
  const double k0 = config.c * m / (config.d * config.d);
  return std::max<long>(2, static_cast<long>(std::ceil(k0)));
}

double thm2_prob_bound(const GreedyConfig& config, int m, long k) {
  if (k < thm2_validity_threshold(config, m))
    throw OutOfValidityRange("probability bound valid only for k >= ceil(c m / d^2)");
  const double d2 = config.d * config.d;
  const double c = config.c;
  const double cpp = config.c_dblprime;
  const double e_half = std::exp(0.5);
  const double ratio = (c * m) / ((static_cast<double>(k) - 1.0) * d2 * e_half);

  const double term1 = c / (d2 * static_cast<double>(k));
  const double log_term = std::log(1.0 / ratio);
  const double term2 = std::max(0.0, (2.0 * c / d2) * log_term * std::pow(ratio, c / (5.0 * d2)));
  const double term3 = (2.0 * cpp * std::exp(1.0) / d2) * std::pow(ratio, c / cpp);
  return term1 + term2 + term3;
}

double cor3_regret_bound(const GreedyConfig& config, const BoundInputs& inputs, long n) {
  const long k0 = thm2_validity_threshold(config, inputs.arms());
  double prob_sum = 0.0;
  for (long k = 1; k <= n; ++k) {
    const double p = (k < k0) ? 1.0 : std::min(1.0, thm2_prob_bound(config, inputs.arms(), k));
    prob_sum += p;
  }
  double total = 0.0;
  for (int j = 0; j < inputs.arms(); ++j) {
    total += L_bound(inputs.stats[j], inputs.schedule, inputs.gamma, n, inputs.branch);
    if (j == inputs.optimal_arm || inputs.gaps[j] <= 0.0) continue;
    total += inputs.gaps[j] * prob_sum;
  }
  return total;
}

GreedyConfig theoretical_greedy_config(const BoundInputs& inputs, long n, double c_prime,
                                       std::optional<double> c_override,
                                       std::optional<double> d_override) {
  const double kappa = kappa_constant(l_evaluator(inputs), n, inputs.arms());
  const double d = d_override.value_or(inputs.delta_min);
  return make_greedy_config(kappa, d, c_prime, c_override);
}

double harmonic_bound(long tau0, long zeta, long n) {
  if (tau0 < 1 || zeta < 1 || n < 1) throw std::invalid_argument("harmonic bound requires positive arguments");
  const double t0 = static_cast<double>(tau0);
  const double z = static_cast<double>(zeta);
  return 1.0 / t0 + std::log(1.0 + z * static_cast<double>(n) / t0) / z;
}

double harmonic_sum_exact(long tau0, long zeta, long n) {
  if (tau0 < 1 || zeta < 1 || n < 1) throw std::invalid_argument("harmonic sum requires positive arguments");
  double s = 0.0;
  for (long i = 1; i <= n; ++i) s += 1.0 / static_cast<double>(tau0 + zeta * (i - 1));
  return s;
}

double arith_geo_sum(double a, double d, double r, long n) {
  if (std::abs(r) >= 1.0) throw std::invalid_argument("arithmetico-geometric sum requires |r| < 1");
  if (n < 0) throw std::invalid_argument("term count must be nonnegative");
  const double rn = geom_pow(std::abs(r), static_cast<double>(n)) *
                    ((r < 0.0 && (n % 2 != 0)) ? -1.0 : 1.0);
  const double dn = static_cast<double>(n);
  return (a - rn * (a + d * dn)) / (1.0 - r) + d * r * (1.0 - rn) / ((1.0 - r) * (1.0 - r));
}

double arith_geo_inf_bound(double a, double d, double r) {
  if (std::abs(r) >= 1.0) throw std::invalid_argument("arithmetico-geometric bound requires |r| < 1");
  return a / (1.0 - r) + d * r / ((1.0 - r) * (1.0 - r));
}

const char* bound_curve_kind_name(BoundCurve::Kind kind) {
  switch (kind) {
    case BoundCurve::Kind::L:
      return "L";
    case BoundCurve::Kind::RegretCor1:
      return "regret_cor1";
    case BoundCurve::Kind::RegretCor2:
      return "regret_cor2";
    case BoundCurve::Kind::RegretCor3:
      return "regret_cor3";
    case BoundCurve::Kind::Thm1Plays:
      return "thm1_plays";
    case BoundCurve::Kind::Thm2Prob:
      return "thm2_prob";
  }
  return "";
}

}  // namespace epochbandit
