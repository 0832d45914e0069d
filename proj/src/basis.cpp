// SPDX-License-Identifier: Apache-2.0
#include "mvstop/basis.hpp"

#include "mvstop/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace mvstop {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Szego's bound on ||psi_j||_inf.
const double kM0 = 1.086435 / std::pow(kPi, 0.25);

// psi_0(x) = pi^{-1/4} e^{-x^2/2}; psi_{k+1} = x sqrt(2/(k+1)) psi_k
//            - sqrt(k/(k+1)) psi_{k-1}. Values stay bounded by M_0, so the
// recurrence never overflows (unlike the raw Hermite polynomials).
void hermite_eval(int count, double x, std::span<double> out) {
    const double psi0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (count >= 1) out[0] = psi0;
    if (count >= 2) out[1] = std::sqrt(2.0) * x * psi0;
    for (int k = 1; k + 1 < count; ++k) {
        out[k + 1] = x * std::sqrt(2.0 / (k + 1)) * out[k] -
                     std::sqrt(static_cast<double>(k) / (k + 1)) * out[k - 1];
    }
}

double ell_from_lipschitz(const std::vector<double>& ls) {
    double acc = 0.0;
    for (double l : ls) acc += l * l;
    return std::sqrt(acc);
}

}  // namespace

double hermite_sup_bound() { return kM0; }

double hermite_function(int order, double x) {
    if (order < 0) throw std::invalid_argument("hermite_function: order must be >= 0");
    std::vector<double> buf(static_cast<std::size_t>(order) + 1);
    hermite_eval(order + 1, x, buf);
    return buf.back();
}

BasisSet hermite_basis(int k) {
    if (k < 1) throw std::invalid_argument("hermite_basis: K must be >= 1");
    BasisSet b;
    b.dim = 1;
    b.size = k;
    b.eval = [k](std::span<const double> x, std::span<double> out) {
        hermite_eval(k, x[0], out);
    };
    b.sup_bound = kM0;
    b.lipschitz.resize(static_cast<std::size_t>(k));
    // From psi_k' = sqrt(k/2) psi_{k-1} - sqrt((k+1)/2) psi_{k+1}: the
    // k >= 1 constants are the ones stated with the example; at k = 0 only
    // the psi_1 term survives. (The sharper (sqrt(k/2)+sqrt((k+1)/2)) M_0
    // would also do; the stated constant is kept.)
    b.lipschitz[0] = kM0 / std::sqrt(2.0);
    for (int j = 1; j < k; ++j) b.lipschitz[static_cast<std::size_t>(j)] = 2.0 * kM0 * std::sqrt(j);
    b.ell = ell_from_lipschitz(b.lipschitz);
    return b;
}

BasisFamily hermite_family(int k) {
    BasisFamily f;
    f.descriptor = {"hermite", k};
    f.at = [k](int) { return hermite_basis(k); };
    return f;
}

BasisSet poly_reward_basis(int degree, const RewardSpec& reward, int date, double box_lo,
                           double box_hi, int dim) {
    if (degree < 0) throw std::invalid_argument("poly_reward_basis: degree must be >= 0");
    if (dim < 1) throw std::invalid_argument("poly_reward_basis: dim must be >= 1");
    if (date < 1 || date > reward.num_dates)
        throw std::invalid_argument("poly_reward_basis: date out of range");
    if (!(box_hi > box_lo)) throw std::invalid_argument("poly_reward_basis: empty box");

    const int k = 1 + dim * degree + 1;
    auto payoff = reward.payoff;
    BasisSet b;
    b.dim = dim;
    b.size = k;
    b.eval = [degree, dim, date, payoff](std::span<const double> x, std::span<double> out) {
        out[0] = 1.0;
        int idx = 1;
        for (int p = 1; p <= degree; ++p)
            for (int l = 0; l < dim; ++l) out[idx++] = std::pow(x[l], p);
        out[idx] = payoff(date, x);
    };

    // Conservative metadata on the box.
    const double xmax = std::max(std::abs(box_lo), std::abs(box_hi));
    b.lipschitz.assign(static_cast<std::size_t>(k), 0.0);
    double sum_sq_sup = 1.0;  // constant column
    int idx = 1;
    for (int p = 1; p <= degree; ++p) {
        const double sup = std::pow(xmax, p);
        const double lip = p * std::pow(xmax, p - 1);
        for (int l = 0; l < dim; ++l) {
            b.lipschitz[static_cast<std::size_t>(idx)] = lip;
            sum_sq_sup += sup * sup;
            ++idx;
        }
    }
    // Reward column: scan the box for its sup; Lipschitz from the reward metadata.
    double g_sup = 0.0;
    constexpr int scan = 512;
    std::vector<double> pt(static_cast<std::size_t>(dim));
    for (int s = 0; s <= scan; ++s) {
        const double x = box_lo + (box_hi - box_lo) * s / scan;
        for (int l = 0; l < dim; ++l) pt[static_cast<std::size_t>(l)] = x;
        g_sup = std::max(g_sup, std::abs(reward.payoff(date, pt)));
    }
    b.lipschitz[static_cast<std::size_t>(k - 1)] = reward.payoff_lipschitz;
    sum_sq_sup += g_sup * g_sup;
    b.sup_bound = std::sqrt(sum_sq_sup / k);
    b.ell = ell_from_lipschitz(b.lipschitz);
    return b;
}

BasisFamily poly_reward_family(int degree, const RewardSpec& reward, double box_lo,
                               double box_hi, int dim) {
    BasisFamily f;
    f.descriptor = {"poly_reward", degree};
    f.at = [degree, reward, box_lo, box_hi, dim](int date) {
        return poly_reward_basis(degree, reward, date, box_lo, box_hi, dim);
    };
    return f;
}

Eigen::MatrixXd design_matrix(const BasisSet& basis, std::span<const double> states,
                              int n_samples, int dim) {
    if (n_samples < 1) throw std::invalid_argument("design_matrix: empty sample");
    if (static_cast<std::size_t>(n_samples) * dim != states.size())
        throw std::invalid_argument("design_matrix: states size mismatch");
    Eigen::MatrixXd z(n_samples, basis.size);
    std::vector<double> row(static_cast<std::size_t>(basis.size));
    for (int i = 0; i < n_samples; ++i) {
        basis.eval(states.subspan(static_cast<std::size_t>(i) * dim, dim), row);
        for (int j = 0; j < basis.size; ++j) z(i, j) = row[static_cast<std::size_t>(j)];
    }
    return z;
}

Eigen::MatrixXd gram_matrix(const BasisSet& basis, std::span<const double> states,
                            int n_samples, int dim) {
    const Eigen::MatrixXd z = design_matrix(basis, states, n_samples, dim);
    const int k = basis.size;
    Eigen::MatrixXd g(k, k);
    std::vector<double> prod(static_cast<std::size_t>(n_samples));
    for (int a = 0; a < k; ++a) {
        for (int b = a; b < k; ++b) {
            for (int i = 0; i < n_samples; ++i)
                prod[static_cast<std::size_t>(i)] = z(i, a) * z(i, b);
            const double v = pairwise_sum(prod) / n_samples;
            g(a, b) = v;
            g(b, a) = v;
        }
    }
    return g;
}

}  // namespace mvstop
