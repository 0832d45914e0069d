// SPDX-License-Identifier: Apache-2.0
#pragma once

// Regression basis families with the bound/Lipschitz metadata needed by the
// spectral diagnostics: Hermite functions (d = 1) and monomials augmented
// with the date-j reward.

#include "mvstop/model.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mvstop {

struct BasisSet {
    int dim = 1;
    int size = 0;  // K
    // Writes psi_1..psi_K(x) into out (out.size() == size).
    std::function<void(std::span<const double> x, std::span<double> out)> eval;
    double sup_bound = 0.0;          // M_K with (1/K) sum psi_k^2 <= M_K^2
    std::vector<double> lipschitz;   // L_1..L_K
    double ell = 0.0;                // sqrt(sum L_k^2)

    std::vector<double> operator()(std::span<const double> x) const {
        std::vector<double> out(static_cast<std::size_t>(size));
        eval(x, out);
        return out;
    }
};

// Serializable identity of a basis family (for policy JSON).
struct BasisDescriptor {
    std::string kind;  // "hermite" | "poly_reward"
    int param = 0;     // K for hermite, degree for poly_reward
};

// A family assigns a basis to each exercise date (poly_reward varies with
// the date through the reward column; hermite does not).
struct BasisFamily {
    BasisDescriptor descriptor;
    std::function<BasisSet(int date)> at;
};

// Hermite functions psi_0..psi_{K-1}, evaluated by the stable normalized
// three-term recurrence. sup bound M_0 ~= 0.8160; Lipschitz constants
// L_k = 2 M_0 sqrt(k) for k >= 1 and M_0/sqrt(2) for k = 0.
BasisSet hermite_basis(int k);
BasisFamily hermite_family(int k);

// Single Hermite function value psi_order(x).
double hermite_function(int order, double x);

// Upper bound on the sup norm of the Hermite functions.
double hermite_sup_bound();

// {1, x, ..., x^degree, g_j(x)}; for dim > 1, monomials per coordinate.
// Metadata is computed on the box [box_lo, box_hi] per coordinate.
BasisSet poly_reward_basis(int degree, const RewardSpec& reward, int date, double box_lo,
                           double box_hi, int dim = 1);
BasisFamily poly_reward_family(int degree, const RewardSpec& reward, double box_lo,
                               double box_hi, int dim = 1);

// Design matrix with rows psi(x_i) for the given states (row-major, dim
// components per state).
Eigen::MatrixXd design_matrix(const BasisSet& basis, std::span<const double> states,
                              int n_samples, int dim);

// Empirical Gram (1/N) sum_i psi(x_i) psi(x_i)^T.
Eigen::MatrixXd gram_matrix(const BasisSet& basis, std::span<const double> states,
                            int n_samples, int dim);

}  // namespace mvstop
