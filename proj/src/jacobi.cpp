#include "epochbandit/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epochbandit {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = p + 1; q < a.cols(); ++q) s += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(s);
}

}  // namespace

Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, double tolerance, int max_sweeps) {
  if (a.rows() != a.cols()) throw std::invalid_argument("jacobi: matrix must be square");
  const Eigen::Index n = a.rows();
  if (n == 1) return a.diagonal();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tolerance) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= tolerance / (double(n) * double(n))) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        // Smaller-magnitude root of t^2 + 2*theta*t - 1 = 0.
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double api = a(p, i);
          const double aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
      }
    }
  }

  Eigen::VectorXd values = a.diagonal();
  std::sort(values.data(), values.data() + n);
  return values;
}

}  // namespace epochbandit
