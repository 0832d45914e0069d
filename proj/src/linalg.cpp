// SPDX-License-Identifier: Apache-2.0
#include "mvstop/linalg.hpp"

#include <stdexcept>

namespace mvstop {

EigenRange symmetric_eigen_range(const Eigen::MatrixXd& sym) {
    if (sym.rows() != sym.cols())
        throw std::invalid_argument("symmetric_eigen_range: matrix not square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

double op_norm(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0.0;
    // Work on the smaller Gram factor; singular values squared.
    if (a.rows() >= a.cols()) {
        Eigen::MatrixXd g = a.transpose() * a;
        const double l = symmetric_eigen_range(g).lambda_max;
        return std::sqrt(std::max(0.0, l));
    }
    Eigen::MatrixXd g = a * a.transpose();
    const double l = symmetric_eigen_range(g).lambda_max;
    return std::sqrt(std::max(0.0, l));
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& z) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tol = 1e-13 * sv.maxCoeff() * static_cast<double>(std::max(z.rows(), z.cols()));
    Eigen::VectorXd inv(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        inv[i] = (sv[i] > tol) ? 1.0 / sv[i] : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace mvstop
