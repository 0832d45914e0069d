// SPDX-License-Identifier: Apache-2.0
#include "mvstop/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvstop {

namespace {

void validate(const ShimizuYamadaParams& p) {
    if (!(p.a > 0.0)) throw std::invalid_argument("ShimizuYamadaParams: a must be > 0");
    if (!(p.sigma >= 0.0)) throw std::invalid_argument("ShimizuYamadaParams: sigma must be >= 0");
    if (!(p.rate >= 0.0)) throw std::invalid_argument("ShimizuYamadaParams: rate must be >= 0");
    if (!(p.strike > 0.0)) throw std::invalid_argument("ShimizuYamadaParams: strike must be > 0");
}

}  // namespace

ModelSpec sy_model(const ShimizuYamadaParams& params) {
    validate(params);
    ModelSpec m;
    m.dim = 1;
    m.brownian_dim = 1;
    const double a = params.a;
    const double sigma = params.sigma;
    m.drift_kernel = [a](std::span<const double> x, std::span<const double> y,
                         std::span<double> out) { out[0] = a * (y[0] - x[0]); };
    m.diff_kernel = [sigma](std::span<const double>, std::span<const double>,
                            std::span<double> out) { out[0] = sigma; };
    m.initial_state = {params.x0};
    m.kernels_affine_in_y = true;
    m.sy = params;
    return m;
}

ModelSpec sy_multiplicative_model(const ShimizuYamadaParams& params) {
    validate(params);
    ModelSpec m;
    m.dim = 1;
    m.brownian_dim = 1;
    const double a = params.a;
    const double sigma = params.sigma;
    m.drift_kernel = [a](std::span<const double> x, std::span<const double> y,
                         std::span<double> out) { out[0] = a * (y[0] - x[0]); };
    m.diff_kernel = [sigma](std::span<const double> x, std::span<const double>,
                            std::span<double> out) { out[0] = sigma * x[0]; };
    m.initial_state = {params.x0};
    m.kernels_affine_in_y = true;  // diffusion does not depend on y at all
    m.sy = std::nullopt;
    return m;
}

ConditionalMoments sy_conditional_moments(const ShimizuYamadaParams& params, double s,
                                          double t, double xs) {
    validate(params);
    if (s < 0.0 || s > t) throw std::invalid_argument("sy_conditional_moments: need 0 <= s <= t");
    const double dt = t - s;
    // mean = e^{-a dt} xs + x0 (1 - e^{-a dt}), written so xs == x0 is exact.
    const double decay = -std::expm1(-params.a * dt);  // 1 - e^{-a dt}
    ConditionalMoments cm;
    cm.mean = xs + (params.x0 - xs) * decay;
    cm.var = params.sigma * params.sigma * (-std::expm1(-2.0 * params.a * dt)) / (2.0 * params.a);
    return cm;
}

double sy_exact_increment(const ShimizuYamadaParams& params, double s, double t, double xs,
                          double gauss) {
    const ConditionalMoments cm = sy_conditional_moments(params, s, t, xs);
    return cm.mean + std::sqrt(cm.var) * gauss;
}

namespace {

RewardSpec make_vanilla_reward(const ShimizuYamadaParams& params, int num_dates, double horizon,
                               double box_lo, double box_hi, bool call) {
    validate(params);
    if (num_dates < 1) throw std::invalid_argument("RewardSpec: num_dates must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("RewardSpec: horizon must be > 0");
    const double r = params.rate;
    const double k = params.strike;
    const double dt = horizon / num_dates;
    RewardSpec g;
    g.num_dates = num_dates;
    if (call) {
        g.payoff = [r, k, dt](int j, std::span<const double> x) {
            return std::exp(-r * dt * j) * std::max(0.0, x[0] - k);
        };
        g.payoff_bound = std::exp(-r * dt) * std::max(0.0, box_hi - k);
    } else {
        g.payoff = [r, k, dt](int j, std::span<const double> x) {
            return std::exp(-r * dt * j) * std::max(0.0, k - x[0]);
        };
        g.payoff_bound = std::exp(-r * dt) * std::max(0.0, k - box_lo);
    }
    g.payoff_lipschitz = std::exp(-r * dt);  // discount at the earliest date dominates
    return g;
}

}  // namespace

RewardSpec make_call_reward(const ShimizuYamadaParams& params, int num_dates, double horizon,
                            double box_lo, double box_hi) {
    return make_vanilla_reward(params, num_dates, horizon, box_lo, box_hi, true);
}

RewardSpec make_put_reward(const ShimizuYamadaParams& params, int num_dates, double horizon,
                           double box_lo, double box_hi) {
    return make_vanilla_reward(params, num_dates, horizon, box_lo, box_hi, false);
}

RewardSpec make_constant_reward(double value, int num_dates) {
    if (value < 0.0) throw std::invalid_argument("RewardSpec: constant reward must be >= 0");
    if (num_dates < 1) throw std::invalid_argument("RewardSpec: num_dates must be >= 1");
    RewardSpec g;
    g.num_dates = num_dates;
    g.payoff = [value](int, std::span<const double>) { return value; };
    g.payoff_bound = value;
    g.payoff_lipschitz = 0.0;
    return g;
}

std::pair<double, double> sy_state_box(const ShimizuYamadaParams& params, double width) {
    validate(params);
    const double s = params.sigma / std::sqrt(2.0 * params.a);
    return {params.x0 - width * s, params.x0 + width * s};
}

}  // namespace mvstop
