// SPDX-License-Identifier: Apache-2.0
#pragma once

// Mean-field model declarations and the closed-form facilities of the
// Shimizu-Yamada benchmark (linear mean-reverting drift, additive noise).

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mvstop {

// Interaction kernels a(x, y) -> R^d and b(x, y) -> R^{d x m} (row-major).
using DriftKernel =
    std::function<void(std::span<const double> x, std::span<const double> y, std::span<double> out)>;
using DiffKernel =
    std::function<void(std::span<const double> x, std::span<const double> y, std::span<double> out)>;

struct ShimizuYamadaParams {
    double a = 1.0;       // mean reversion rate (> 0)
    double sigma = 0.2;   // volatility (>= 0)
    double x0 = 1.0;      // initial value
    double rate = 0.05;   // discount rate r (>= 0)
    double strike = 0.1;  // strike K (> 0)
};

struct ModelSpec {
    int dim = 1;
    int brownian_dim = 1;
    DriftKernel drift_kernel;
    DiffKernel diff_kernel;
    std::vector<double> initial_state;
    double horizon = 1.0;

    // Kernels affine in the second argument: the mean-field average
    // (1/N) sum_j k(x, X_j) equals k(x, mean), allowing an O(N) step.
    bool kernels_affine_in_y = false;

    // Set when the model admits the closed-form Gaussian transition.
    std::optional<ShimizuYamadaParams> sy;
};

struct RewardSpec {
    int num_dates = 1;  // J
    // payoff(j, x) for exercise dates j = 1..J; nonnegative.
    std::function<double(int j, std::span<const double> x)> payoff;
    double payoff_bound = 0.0;      // M_f (metadata; on the evaluation box)
    double payoff_lipschitz = 0.0;  // L_f
};

// Drift a(x,y) = a (y - x), diffusion sigma; rejects a <= 0 or sigma < 0.
ModelSpec sy_model(const ShimizuYamadaParams& params);

// Same drift with multiplicative diffusion sigma * x. No closed form; this
// is the default benchmark for the Euler strong-rate study, where a
// state-dependent diffusion keeps the scheme at the generic 1/2 rate.
ModelSpec sy_multiplicative_model(const ShimizuYamadaParams& params);

// Conditional mean and variance of the limit process over [s, t].
struct ConditionalMoments {
    double mean = 0.0;
    double var = 0.0;
};
ConditionalMoments sy_conditional_moments(const ShimizuYamadaParams& params, double s,
                                          double t, double xs);

// Exact Gaussian transition sampler: mean + sqrt(var) * gauss.
double sy_exact_increment(const ShimizuYamadaParams& params, double s, double t, double xs,
                          double gauss);

// Discounted call/put rewards g_j(x) = e^{-r t_j} (x - K)^+ resp. (K - x)^+
// with t_j = j * horizon / num_dates; the discount lives inside g_j.
// Metadata (bound/Lipschitz) is taken on [box_lo, box_hi].
RewardSpec make_call_reward(const ShimizuYamadaParams& params, int num_dates, double horizon,
                            double box_lo, double box_hi);
RewardSpec make_put_reward(const ShimizuYamadaParams& params, int num_dates, double horizon,
                           double box_lo, double box_hi);
RewardSpec make_constant_reward(double value, int num_dates);

// Default metadata box for the benchmark: x0 +/- width * sigma / sqrt(2a).
std::pair<double, double> sy_state_box(const ShimizuYamadaParams& params, double width = 6.0);

}  // namespace mvstop
