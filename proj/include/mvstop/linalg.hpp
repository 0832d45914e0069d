// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense-matrix helpers shared by the regression and perturbation code.

#include <Eigen/Dense>

namespace mvstop {

// Extreme eigenvalues of a symmetric matrix.
struct EigenRange {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

EigenRange symmetric_eigen_range(const Eigen::MatrixXd& sym);

// Operator 2-norm (largest singular value).
double op_norm(const Eigen::MatrixXd& a);

// Moore-Penrose pseudoinverse of a full-column-rank tall matrix,
// (Z^T Z)^{-1} Z^T, computed from the SVD.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& z);

}  // namespace mvstop
