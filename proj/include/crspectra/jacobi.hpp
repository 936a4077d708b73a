#pragma once

#include <Eigen/Dense>

namespace crs {

struct HermitianEigen {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns, matching `values`
  int sweeps = 0;
  double off_norm = 0.0;     // Frobenius norm of the final off-diagonal part
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Rotations follow the fixed
/// row-major (p, q) order, so results are bit-reproducible.
HermitianEigen jacobi_eigen(const Eigen::MatrixXcd& a, double tol = 1e-15, int max_sweeps = 60);

}  // namespace crs
