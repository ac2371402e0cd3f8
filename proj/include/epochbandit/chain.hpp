#pragma once

#include "epochbandit/types.hpp"

namespace epochbandit {

struct AssumptionReport {
  bool irreducible = false;
  bool aperiodic = false;
  bool m_irreducible = false;
  bool ok() const { return irreducible && aperiodic && m_irreducible; }
};

/// Per-chain spectral constants feeding every bound.
///
/// lambda2M is the second largest eigenvalue of the multiplicative
/// reversiblization M(P) = P * reverse(P); lambda is its square root and
/// acts as the geometric mixing rate. C bounds the effect of an arbitrary
/// initial distribution. eta/phi/psi combine the discount factor with the
/// mixing rate: eta = min(gamma, lambda), phi = max(gamma, lambda),
/// psi = eta/phi.
struct ChainStats {
  StateDistribution pi;
  double lambda2M = 0.0;
  double lambda = 0.0;
  double C = 0.0;
  double eta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
};

// Throws std::invalid_argument unless every row sums to 1 within
// tol::row_stochastic and entries lie in [0, 1].
void require_row_stochastic(const TransitionMatrix& P);

/// Irreducibility as strong connectivity of the positive-entry digraph,
/// aperiodicity via the primitivity test (some boolean power of the
/// adjacency matrix entrywise positive; checked at the Wielandt exponent
/// (n-1)^2 + 1), and irreducibility of M(P) computed after the stationary
/// distribution.
AssumptionReport check_assumptions(const TransitionMatrix& P);

/// Stationary distribution of an ergodic chain.
///
/// Solves (P^T - I) x = 0 with one row replaced by the normalization
/// constraint; falls back to power iteration when the solve degrades.
/// Throws NonErgodicChain when check_assumptions fails irreducible+aperiodic.
StateDistribution stationary_distribution(const TransitionMatrix& P);

/// Time reversal: reverse(P)(s, s') = pi(s') P(s', s) / pi(s).
TransitionMatrix time_reversal(const TransitionMatrix& P, const StateDistribution& pi);

/// Multiplicative reversiblization M(P) = P * reverse(P). Reversible with
/// the same stationary distribution; all eigenvalues real and nonnegative.
TransitionMatrix multiplicative_reversiblization(const TransitionMatrix& P);

/// Second largest eigenvalue of M(P), in [0, 1).
///
/// M is pi-reversible, so D^{1/2} M D^{-1/2} with D = diag(pi) is symmetric;
/// its spectrum is computed with the cyclic Jacobi solver. Throws
/// SpectralAssumptionViolated when the value reaches 1 within
/// tol::spectral_margin.
double lambda2_M(const TransitionMatrix& P);

/// Bundle of all spectral constants for one chain and discount factor.
ChainStats chain_stats(const TransitionMatrix& P, double gamma);

/// beta^T P^tau, renormalized if drift exceeds tol::distribution_drift.
StateDistribution evolve(const StateDistribution& beta, const TransitionMatrix& P, long tau);

/// Chi-squared distance sum((beta - pi)^2 / pi).
double chi_squared_distance(const StateDistribution& beta, const StateDistribution& pi);

/// Total variation distance, half the l1 distance.
double tv_distance(const StateDistribution& a, const StateDistribution& b);

/// Geometric convergence bound (1/4) chi0sq lambda2M^n on the squared total
/// variation distance from stationarity after n steps.
double fill_bound(double chi0sq, double lambda2M, long n);

/// Distribution-free variant with chi0sq replaced by its maximum
/// 1 + (1 - min pi)^2 / min pi.
double fill_bound_distribution_free(const StateDistribution& pi, double lambda2M, long n);

}  // namespace epochbandit
