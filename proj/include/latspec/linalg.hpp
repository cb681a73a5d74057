#pragma once

#include <Eigen/Dense>

namespace latspec {

/// Number of eigenvalues of the symmetric matrix A strictly above lambda,
/// from the inertia of a Bunch-Kaufman factorization of A - lambda I.
/// Eigenvalues within 1e-12 ||A||_inf of lambda count as not above.
/// Throws Contract when A is not square and symmetric (to 1e-12 relative).
int count_above(const Eigen::MatrixXd& A, double lambda);

/// As count_above, consuming the matrix and skipping the symmetry check.
int count_above_inplace(Eigen::MatrixXd& A, double lambda);

/// Number of singular values of B strictly above s (s > 0), via the inertia of
/// [[-s I, B], [B^T, -s I]].
int count_singular_above(const Eigen::MatrixXd& B, double s);

/// All eigenvalues of a symmetric matrix, ascending (LAPACK dsyevd).
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& A);

} // namespace latspec
