#pragma once

#include <Eigen/Dense>

namespace epochbandit {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps row by row, annihilating each off-diagonal entry, until the
/// off-diagonal Frobenius norm falls below `tolerance`. Intended for the
/// small dense matrices of this library (|Theta| <= 64).
///
/// Returns the eigenvalues sorted ascending.
Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, double tolerance = 1e-12,
                                   int max_sweeps = 100);

}  // namespace epochbandit
