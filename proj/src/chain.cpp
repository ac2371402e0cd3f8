#include "epochbandit/chain.hpp"

#include <bitset>
#include <cmath>
#include <vector>

#include "epochbandit/jacobi.hpp"

namespace epochbandit {

namespace {

constexpr int kMaxStates = 64;
using AdjRow = std::bitset<kMaxStates>;
using Adjacency = std::vector<AdjRow>;

Adjacency positive_graph(const TransitionMatrix& P) {
  const int n = static_cast<int>(P.rows());
  Adjacency adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (P(i, j) > tol::graph_edge) adj[i].set(j);
  return adj;
}

AdjRow reachable_from(const Adjacency& adj, int start) {
  AdjRow seen;
  seen.set(start);
  std::vector<int> stack{start};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
      if (adj[u].test(v) && !seen.test(v)) {
        seen.set(v);
        stack.push_back(v);
      }
    }
  }
  return seen;
}

bool strongly_connected(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  AdjRow all;
  for (int i = 0; i < n; ++i) all.set(i);
  if (reachable_from(adj, 0) != all) return false;
  Adjacency rev(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (adj[i].test(j)) rev[j].set(i);
  return reachable_from(rev, 0) == all;
}

Adjacency boolean_product(const Adjacency& a, const Adjacency& b) {
  const int n = static_cast<int>(a.size());
  Adjacency out(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k)
      if (a[i].test(k)) out[i] |= b[k];
  }
  return out;
}

bool all_positive(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  AdjRow all;
  for (int i = 0; i < n; ++i) all.set(i);
  for (int i = 0; i < n; ++i)
    if (adj[i] != all) return false;
  return true;
}

// Primitivity: A^w entrywise positive at the Wielandt exponent
// w = (n-1)^2 + 1, evaluated by binary powering of the boolean adjacency.
bool primitive(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  long w = static_cast<long>(n - 1) * (n - 1) + 1;
  Adjacency base = adj;
  Adjacency acc(n);
  for (int i = 0; i < n; ++i) acc[i].set(i);
  while (w > 0) {
    if (w & 1) acc = boolean_product(acc, base);
    base = boolean_product(base, base);
    w >>= 1;
  }
  return all_positive(acc);
}

StateDistribution power_iteration(const TransitionMatrix& P) {
  const int n = static_cast<int>(P.rows());
  StateDistribution v = StateDistribution::Constant(n, 1.0 / n);
  for (int it = 0; it < tol::power_iteration_max; ++it) {
    StateDistribution next = P.transpose() * v;
    next /= next.sum();
    if ((next - v).lpNorm<1>() < tol::power_iteration) return next;
    v = next;
  }
  return v;
}

// Direct linear solve with a normalization row; power-iteration fallback
// when the solve degrades. No assumption checks.
StateDistribution stationary_unchecked(const TransitionMatrix& P) {
  const int n = static_cast<int>(P.rows());
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  StateDistribution pi = A.partialPivLu().solve(b);

  if (!pi.allFinite() || pi.minCoeff() <= 0.0 ||
      (P.transpose() * pi - pi).lpNorm<1>() > tol::stationarity) {
    pi = power_iteration(P);
  }
  pi = pi.cwiseMax(0.0).eval();
  pi /= pi.sum();
  return pi;
}

}  // namespace

void require_row_stochastic(const TransitionMatrix& P) {
  if (P.rows() != P.cols() || P.rows() < 1)
    throw std::invalid_argument("transition matrix must be square and nonempty");
  if (P.rows() > kMaxStates)
    throw std::invalid_argument("state spaces above 64 states are not supported");
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      const double p = P(i, j);
      if (p < 0.0 || p > 1.0 + tol::row_stochastic)
        throw std::invalid_argument("transition probabilities must lie in [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol::row_stochastic)
      throw std::invalid_argument("transition matrix row does not sum to 1");
  }
}

AssumptionReport check_assumptions(const TransitionMatrix& P) {
  require_row_stochastic(P);
  AssumptionReport report;
  const Adjacency adj = positive_graph(P);
  report.irreducible = strongly_connected(adj);
  report.aperiodic = primitive(adj);
  if (report.irreducible && report.aperiodic) {
    const StateDistribution pi = stationary_unchecked(P);
    if (pi.minCoeff() > 0.0) {
      const TransitionMatrix M = P * time_reversal(P, pi);
      report.m_irreducible = strongly_connected(positive_graph(M));
    }
  }
  return report;
}

StateDistribution stationary_distribution(const TransitionMatrix& P) {
  require_row_stochastic(P);
  const Adjacency adj = positive_graph(P);
  if (!strongly_connected(adj) || !primitive(adj))
    throw NonErgodicChain("stationary distribution requires an irreducible aperiodic chain");
  return stationary_unchecked(P);
}

TransitionMatrix time_reversal(const TransitionMatrix& P, const StateDistribution& pi) {
  if (pi.minCoeff() <= 0.0)
    throw std::invalid_argument("time reversal requires a strictly positive stationary distribution");
  const int n = static_cast<int>(P.rows());
  TransitionMatrix R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = pi(j) * P(j, i) / pi(i);
  return R;
}

TransitionMatrix multiplicative_reversiblization(const TransitionMatrix& P) {
  const StateDistribution pi = stationary_distribution(P);
  return P * time_reversal(P, pi);
}

double lambda2_M(const TransitionMatrix& P) {
  const StateDistribution pi = stationary_distribution(P);
  const TransitionMatrix M = P * time_reversal(P, pi);

  // Similarity transform to a symmetric matrix: S = D^{1/2} M D^{-1/2}.
  const int n = static_cast<int>(P.rows());
  Eigen::MatrixXd S(n, n);
  const Eigen::VectorXd sqrt_pi = pi.cwiseSqrt();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = sqrt_pi(i) * M(i, j) / sqrt_pi(j);
  S = 0.5 * (S + S.transpose()).eval();

  const Eigen::VectorXd values = jacobi_eigenvalues(S, tol::jacobi);
  if (std::abs(values(n - 1) - 1.0) > tol::eigen_unit)
    throw std::runtime_error("largest eigenvalue of M(P) deviates from 1");
  if (values(0) < -tol::eigen_unit)
    throw std::runtime_error("M(P) has a significantly negative eigenvalue");

  double lambda2 = (n >= 2) ? values(n - 2) : 0.0;
  if (lambda2 < 0.0) lambda2 = 0.0;
  if (lambda2 >= 1.0 - tol::spectral_margin)
    throw SpectralAssumptionViolated("lambda2(M(P)) reaches 1; M(P) is numerically reducible");
  return lambda2;
}

ChainStats chain_stats(const TransitionMatrix& P, double gamma) {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("discount factor must lie in (0, 1]");
  ChainStats s;
  s.pi = stationary_distribution(P);
  s.lambda2M = lambda2_M(P);
  s.lambda = std::sqrt(s.lambda2M);
  const double pmin = s.pi.minCoeff();
  s.C = 0.5 * std::sqrt(1.0 + (1.0 - pmin) * (1.0 - pmin) / pmin);
  s.eta = std::min(gamma, s.lambda);
  s.phi = std::max(gamma, s.lambda);
  s.psi = (s.phi > 0.0) ? s.eta / s.phi : 0.0;
  return s;
}

StateDistribution evolve(const StateDistribution& beta, const TransitionMatrix& P, long tau) {
  if (tau < 1) throw InvalidTau("evolve requires tau >= 1");
  StateDistribution b = beta;
  for (long t = 0; t < tau; ++t) b = (P.transpose() * b).eval();
  const double sum = b.sum();
  if (std::abs(sum - 1.0) > tol::distribution_drift) b /= sum;
  return b;
}

double chi_squared_distance(const StateDistribution& beta, const StateDistribution& pi) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    const double d = beta(i) - pi(i);
    s += d * d / pi(i);
  }
  return s;
}

double tv_distance(const StateDistribution& a, const StateDistribution& b) {
  return 0.5 * (a - b).lpNorm<1>();
}

double fill_bound(double chi0sq, double lambda2M, long n) {
  if (chi0sq < 0.0) throw std::invalid_argument("chi-squared distance must be nonnegative");
  if (n < 0) throw std::invalid_argument("step count must be nonnegative");
  return 0.25 * chi0sq * std::pow(lambda2M, static_cast<double>(n));
}

double fill_bound_distribution_free(const StateDistribution& pi, double lambda2M, long n) {
  const double pmin = pi.minCoeff();
  if (pmin <= 0.0) throw std::invalid_argument("stationary distribution must be strictly positive");
  const double chi_max = 1.0 + (1.0 - pmin) * (1.0 - pmin) / pmin;
  return fill_bound(chi_max, lambda2M, n);
}

}  // namespace epochbandit
