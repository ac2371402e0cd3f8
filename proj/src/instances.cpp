#include "epochbandit/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace epochbandit {

ProblemInstance example1(double epsilon, double gamma) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("example1 requires epsilon in (0, 0.5)");
  ProblemInstance inst;
  inst.id = "example1(eps=" + std::to_string(epsilon) + ")";
  inst.gamma = gamma;

  TransitionMatrix P0(2, 2), P1(2, 2);
  P0 << 0.0, 1.0, epsilon, 1.0 - epsilon;
  P1 << 1.0 - epsilon, epsilon, 1.0, 0.0;
  inst.P = {P0, P1};

  // Arm 1 pays a deterministic 0.5 in both states; the point mass is encoded
  // as a vanishing-width uniform since the kernel palette has no atom at 0.5.
  const RewardKernel half = RewardKernel::uniform(0.5 - 1e-9, 0.5 + 1e-9);
  inst.kernels = {
      {RewardKernel::bernoulli(0.0), RewardKernel::bernoulli(1.0)},
      {half, half},
  };
  inst.beta1 = StateDistribution(2);
  inst.beta1 << 1.0, 0.0;
  return inst;
}

ProblemInstance penalty_example(double epsilon, double gamma) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("penalty_example requires epsilon in (0, 1)");
  ProblemInstance inst;
  inst.id = "penalty(eps=" + std::to_string(epsilon) + ")";
  inst.gamma = gamma;

  // Rank-1 rows: the chain reaches its stationary distribution in one step.
  TransitionMatrix P(2, 2);
  P << epsilon, 1.0 - epsilon, epsilon, 1.0 - epsilon;
  inst.P = {P};
  inst.kernels = {{RewardKernel::bernoulli(0.0), RewardKernel::bernoulli(1.0)}};
  inst.beta1 = StateDistribution(2);
  inst.beta1 << 1.0, 0.0;
  return inst;
}

namespace {

// Random point with a floor that keeps components within a 3:1 ratio, so
// no suboptimal arm concentrates the way the favored arm does.
Eigen::VectorXd random_simplex_point(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = 0.5 + rng.uniform();
  v /= v.sum();
  return v;
}

// One row with `mass` on the favored index set and the rest elsewhere; all
// entries strictly positive.
Eigen::VectorXd split_mass_row(Rng& rng, int states, int favored, double mass) {
  Eigen::VectorXd row(states);
  const Eigen::VectorXd in = random_simplex_point(rng, favored);
  const Eigen::VectorXd out = random_simplex_point(rng, states - favored);
  for (int j = 0; j < favored; ++j) row(j) = mass * in(j);
  for (int j = favored; j < states; ++j) row(j) = (1.0 - mass) * out(j - favored);
  return row;
}

// Low-variance kernel: a narrow uniform or a concentrated beta. Off-peak
// states use these so that single-play reward noise cannot outrun an index
// policy's shrinking exploration bonus.
RewardKernel low_variance_kernel(Rng& rng, double mean) {
  if (rng.bernoulli(0.5)) {
    const double half = 0.03;
    return RewardKernel::uniform(std::max(0.0, mean - half), std::min(1.0, mean + half));
  }
  const double concentration = 60.0;
  return RewardKernel::beta(mean * concentration, (1.0 - mean) * concentration);
}

// Kernel of the requested mean. The default palette draws concentrated
// betas or narrow uniforms: smoothed rewards keep a usable signal even when
// heavy discounting shrinks the effective sample size of an epoch to a few
// iterations. Bernoulli kernels are available on request.
RewardKernel kernel_with_mean(Rng& rng, double mean, KernelFamilySet palette) {
  int family;
  switch (palette) {
    case KernelFamilySet::BernoulliOnly:
      family = 0;
      break;
    case KernelFamilySet::BetaOnly:
      family = 1;
      break;
    case KernelFamilySet::UniformOnly:
      family = 2;
      break;
    default:
      family = 1 + rng.uniform_int(2);
  }
  switch (family) {
    case 0:
      return RewardKernel::bernoulli(mean);
    case 1: {
      const double concentration = 40.0 + 40.0 * rng.uniform();
      return RewardKernel::beta(mean * concentration, (1.0 - mean) * concentration);
    }
    default: {
      const double half = 0.02 + 0.04 * rng.uniform();
      return RewardKernel::uniform(std::max(0.0, mean - half), std::min(1.0, mean + half));
    }
  }
}

// Chain that keeps `mass` inside `home`, arranged as a slow ladder: entries
// from outside land on home.front() (the gateway) and probability drifts one
// home state at a time toward home.back(). High-reward states are therefore
// reached only after sustained play, and any other arm drags the state away
// in one step. Replicates the start-state trap of the two-arm example at
// scale.
TransitionMatrix ladder_matrix(Rng& rng, int states, const std::vector<int>& home, double mass) {
  TransitionMatrix P = TransitionMatrix::Zero(states, states);
  // The climb rate scales with the leak rate: stronger confinement comes
  // with a proportionally slower ladder, keeping the mixing rate tied to
  // the anti-correlation strength.
  const double advance = (1.0 - mass) * (2.0 + 2.0 * rng.uniform());
  const int h = static_cast<int>(home.size());
  std::vector<int> rung(states, -1);
  for (int i = 0; i < h; ++i) rung[home[i]] = i;
  std::vector<int> away;
  for (int s = 0; s < states; ++s)
    if (rung[s] < 0) away.push_back(s);

  for (int row = 0; row < states; ++row) {
    Eigen::VectorXd in = Eigen::VectorXd::Zero(states);
    const int r = rung[row];
    if (r < 0) {
      in(home[0]) = 1.0;  // gateway
    } else if (r == h - 1) {
      in(home[r]) = 1.0;  // top of the ladder
    } else {
      in(home[r]) = 1.0 - advance;
      in(home[r + 1]) = advance;
    }
    const Eigen::VectorXd out = random_simplex_point(rng, static_cast<int>(away.size()));
    for (int i = 0; i < h; ++i) P(row, home[i]) = mass * in(home[i]);
    for (size_t i = 0; i < away.size(); ++i) P(row, away[i]) = (1.0 - mass) * out(i);
  }
  return P;
}

ProblemInstance try_generate(const GeneratorSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const int favored = (spec.states + 1) / 2;
  ProblemInstance inst;
  inst.gamma = spec.gamma;
  inst.P.reserve(spec.m);
  std::vector<int> favored_states;
  for (int s = 0; s < favored; ++s) favored_states.push_back(s);

  inst.P.push_back(ladder_matrix(rng, spec.states, favored_states, spec.anti_correlation_mass));
  for (int j = 1; j < spec.m; ++j) {
    // Suboptimal arms mix fast over the complement; their value is visible
    // after few pulls while the favored arm needs sustained play.
    TransitionMatrix P(spec.states, spec.states);
    for (int row = 0; row < spec.states; ++row)
      P.row(row) =
          split_mass_row(rng, spec.states, favored, 1.0 - spec.anti_correlation_mass).transpose();
    inst.P.push_back(P);
  }

  // Kernel means drawn at random, sorted to increase with each arm's own
  // stationary probabilities. The top-probability state draws from a high
  // band and the rest from a low band, so an arm pays off only once its
  // chain has concentrated; expected stationary rewards then order by
  // concentration and the favored arm comes out on top. The favored arm's
  // off-peak kernels are low-variance over a tight band.
  inst.kernels.reserve(spec.m);
  for (int j = 0; j < spec.m; ++j) {
    const StateDistribution pi = stationary_distribution(inst.P[j]);
    std::vector<double> means(spec.states);
    if (j == 0) {
      for (int s = 0; s + 1 < spec.states; ++s) means[s] = 0.10 + 0.20 * rng.uniform();
    } else {
      for (int s = 0; s + 1 < spec.states; ++s) means[s] = 0.05 + 0.40 * rng.uniform();
    }
    means[spec.states - 1] = (j == 0) ? 0.80 + 0.15 * rng.uniform() : 0.65 + 0.20 * rng.uniform();
    std::sort(means.begin(), means.end());
    std::vector<int> order(spec.states);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return pi(a) < pi(b); });

    std::vector<RewardKernel> row;
    row.reserve(spec.states);
    std::vector<double> by_state(spec.states);
    for (int rank = 0; rank < spec.states; ++rank) by_state[order[rank]] = means[rank];
    for (int s = 0; s < spec.states; ++s) {
      const bool off_peak = (s != order[spec.states - 1]);
      row.push_back(off_peak ? low_variance_kernel(rng, by_state[s])
                             : kernel_with_mean(rng, by_state[s], spec.kernel_palette));
    }
    inst.kernels.push_back(std::move(row));
  }

  inst.beta1 = StateDistribution::Constant(spec.states, 1.0 / spec.states);
  return inst;
}

}  // namespace

ProblemInstance generate(const GeneratorSpec& spec) {
  if (spec.m < 2 || spec.states < 2)
    throw std::invalid_argument("generator requires at least 2 arms and 2 states");
  if (!(spec.anti_correlation_mass > 0.0 && spec.anti_correlation_mass < 1.0))
    throw std::invalid_argument("anti_correlation_mass must lie in (0, 1)");

  constexpr int kMaxRetries = 100;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    const std::uint64_t seed = mix64(spec.seed, static_cast<std::uint64_t>(attempt));
    ProblemInstance inst = try_generate(spec, seed);
    bool assumptions_ok = true;
    for (int j = 0; j < spec.m && assumptions_ok; ++j)
      assumptions_ok = check_assumptions(inst.P[j]).ok();
    if (!assumptions_ok) continue;
    const InstanceStats stats = analyze(inst);
    if (stats.optimal_arm != 0 || stats.tied_optimum) continue;
    if (stats.delta_min < 0.01) continue;
    inst.id = "generated-m" + std::to_string(spec.m) + "-s" + std::to_string(spec.states) +
              "-seed" + std::to_string(spec.seed);
    return inst;
  }
  throw GenerationExhausted("no valid instance after 100 attempts for these generator parameters");
}

TransitionMatrix sample_random_transition(RandomMatrixDistribution dist, int states,
                                          std::uint64_t seed) {
  if (states < 2) throw std::invalid_argument("need at least 2 states");
  Rng rng(seed);
  constexpr int kMaxRetries = 1000;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    TransitionMatrix P(states, states);
    bool row_ok = true;
    for (int i = 0; i < states && row_ok; ++i) {
      double sum = 0.0;
      for (int j = 0; j < states; ++j) {
        double v = (dist == RandomMatrixDistribution::Uniform) ? rng.uniform()
                                                               : std::max(rng.normal(), 0.0);
        P(i, j) = v;
        sum += v;
      }
      if (sum <= 0.0) {
        row_ok = false;
        break;
      }
      P.row(i) /= sum;
    }
    if (!row_ok) continue;
    if (check_assumptions(P).ok()) return P;
  }
  throw GenerationExhausted("failed to sample an ergodic transition matrix");
}

std::vector<SpectrumSample> spectrum_samples(RandomMatrixDistribution dist, int states,
                                             int samples, std::uint64_t seed) {
  std::vector<SpectrumSample> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const TransitionMatrix P = sample_random_transition(dist, states, mix64(seed, i));
    const double lambda2 = lambda2_M(P);
    out.push_back({lambda2, std::sqrt(lambda2)});
  }
  return out;
}

}  // namespace epochbandit
