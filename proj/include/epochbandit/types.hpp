#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace epochbandit {

// Row-stochastic matrix over a finite state space; rows index the source state.
using TransitionMatrix = Eigen::MatrixXd;
// Probability vector over states.
using StateDistribution = Eigen::VectorXd;

// All numeric tolerances in one place.
namespace tol {
inline constexpr double row_stochastic = 1e-12;
inline constexpr double stationarity = 1e-10;
inline constexpr double jacobi = 1e-12;
inline constexpr double reversibility = 1e-10;
inline constexpr double eigen_unit = 1e-9;
inline constexpr double spectral_margin = 1e-12;
// Entries above this count as edges of the transition graph; filters denormal
// noise from generators.
inline constexpr double graph_edge = 1e-15;
inline constexpr double power_iteration = 1e-13;
inline constexpr int power_iteration_max = 1000000;
inline constexpr double distribution_drift = 1e-12;
inline constexpr double discount_floor = 1e-9;
inline constexpr double discount_mass_check = 1e-9;
// gamma == lambda_j within this window selects the equal-case bound branch.
inline constexpr double branch_window = 1e-6;
// Absolute allowance for audit comparisons; covers the l1 noise floor of
// repeated matrix-vector products.
inline constexpr double audit_slack = 1e-12;
}  // namespace tol

struct NonErgodicChain : std::runtime_error {
  explicit NonErgodicChain(const std::string& what) : std::runtime_error(what) {}
};
struct SpectralAssumptionViolated : std::runtime_error {
  explicit SpectralAssumptionViolated(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidArm : std::invalid_argument {
  explicit InvalidArm(const std::string& what) : std::invalid_argument(what) {}
};
struct InvalidTau : std::invalid_argument {
  explicit InvalidTau(const std::string& what) : std::invalid_argument(what) {}
};
struct UninitializedArm : std::logic_error {
  explicit UninitializedArm(const std::string& what) : std::logic_error(what) {}
};
struct ZeroGap : std::invalid_argument {
  explicit ZeroGap(const std::string& what) : std::invalid_argument(what) {}
};
struct OutOfValidityRange : std::invalid_argument {
  explicit OutOfValidityRange(const std::string& what) : std::invalid_argument(what) {}
};
struct GenerationExhausted : std::runtime_error {
  explicit GenerationExhausted(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace epochbandit
