// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace mvstop {

// Gauss-Hermite rule for the weight e^{-x^2}:
//   integral f(x) e^{-x^2} dx  ~=  sum_i weights[i] * f(nodes[i]).
// Exact for polynomials up to degree 2n-1; sum of weights equals sqrt(pi).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    // E[f(X)] for X ~ N(mean, sd^2) by substitution x = mean + sqrt(2) sd u.
    template <typename F>
    double gaussian_expectation(double mean, double sd, F&& f) const;
};

GaussHermiteRule gauss_hermite(int n);

template <typename F>
double GaussHermiteRule::gaussian_expectation(double mean, double sd, F&& f) const {
    constexpr double inv_sqrt_pi = 0.5641895835477562869;  // 1/sqrt(pi)
    const double s = 1.4142135623730950488 * sd;           // sqrt(2) sd
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        acc += weights[i] * f(mean + s * nodes[i]);
    return acc * inv_sqrt_pi;
}

}  // namespace mvstop
