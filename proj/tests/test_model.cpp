// SPDX-License-Identifier: Apache-2.0
#include "mvstop/model.hpp"
#include "mvstop/numerics.hpp"
#include "mvstop/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace mvstop;

namespace {
ShimizuYamadaParams bench() { return {1.0, 0.2, 1.0, 0.05, 0.1}; }
}  // namespace

TEST_CASE("sy_model rejects invalid parameters") {
    ShimizuYamadaParams p = bench();
    p.a = 0.0;
    CHECK_THROWS_AS(sy_model(p), std::invalid_argument);
    p = bench();
    p.a = -1.0;
    CHECK_THROWS_AS(sy_model(p), std::invalid_argument);
    p = bench();
    p.sigma = -0.1;
    CHECK_THROWS_AS(sy_model(p), std::invalid_argument);
}

TEST_CASE("sy drift kernel is a(y - x)") {
    ShimizuYamadaParams p = bench();
    const ModelSpec m = sy_model(p);
    std::vector<double> x{2.0}, y{5.0}, out{0.0};
    m.drift_kernel(x, y, out);
    CHECK(out[0] == 3.0);  // a = 1: 5 - 2
    m.diff_kernel(x, y, out);
    CHECK(out[0] == 0.2);
    CHECK(m.kernels_affine_in_y);
    CHECK(m.sy.has_value());
}

TEST_CASE("conditional moments: unconditional mean stays at x0") {
    const ShimizuYamadaParams p = bench();
    for (double t : {0.01, 0.3, 1.0, 5.0}) {
        const ConditionalMoments cm = sy_conditional_moments(p, 0.0, t, p.x0);
        CHECK(cm.mean == p.x0);  // exact by construction when xs == x0
    }
}

TEST_CASE("conditional variance frozen value and long-time limits") {
    const ShimizuYamadaParams p = bench();
    const ConditionalMoments cm = sy_conditional_moments(p, 0.0, 1.0, p.x0);
    // 0.04 (1 - e^{-2}) / 2, substituted by hand.
    CHECK(cm.var == doctest::Approx(0.017293294335267746).epsilon(1e-12));

    const ConditionalMoments far = sy_conditional_moments(p, 0.0, 200.0, 3.0);
    CHECK(far.mean == doctest::Approx(p.x0).epsilon(1e-12));
    CHECK(far.var == doctest::Approx(p.sigma * p.sigma / (2.0 * p.a)).epsilon(1e-12));

    const ConditionalMoments zero = sy_conditional_moments(p, 0.7, 0.7, 2.5);
    CHECK(zero.mean == 2.5);
    CHECK(zero.var == 0.0);

    CHECK_THROWS_AS(sy_conditional_moments(p, 1.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sy_conditional_moments(p, -0.1, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("conditional variance matches the sample variance of exact draws") {
    const ShimizuYamadaParams p = bench();
    const ConditionalMoments cm = sy_conditional_moments(p, 0.0, 1.0, p.x0);
    const rng::NormalField field(987, 3);
    const std::size_t n = 1'000'000;
    std::vector<double> draws(n);
    for (std::size_t i = 0; i < n; ++i)
        draws[i] = sy_exact_increment(p, 0.0, 1.0, p.x0, field.normal(i, 0));
    const MeanVar mv = mean_var(draws);
    const double sd = std::sqrt(cm.var);
    CHECK(std::abs(mv.mean - cm.mean) < 4.0 * sd / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(mv.var - cm.var) < 4.0 * cm.var * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("moments compose along intermediate times") {
    const ShimizuYamadaParams p = bench();
    for (double xs : {0.4, 1.0, 1.9}) {
        for (auto [s, u, t] : {std::array{0.0, 0.3, 1.0}, std::array{0.2, 0.9, 1.4}}) {
            const ConditionalMoments su = sy_conditional_moments(p, s, u, xs);
            const ConditionalMoments direct = sy_conditional_moments(p, s, t, xs);
            // Mean composes through the intermediate mean; variance adds the
            // decayed first-leg variance.
            const ConditionalMoments ut_at_mean = sy_conditional_moments(p, u, t, su.mean);
            const double decay = std::exp(-2.0 * p.a * (t - u));
            CHECK(ut_at_mean.mean == doctest::Approx(direct.mean).epsilon(1e-12));
            CHECK(ut_at_mean.var + decay * su.var == doctest::Approx(direct.var).epsilon(1e-12));
        }
    }
}

TEST_CASE("exact increment degenerate cases") {
    const ShimizuYamadaParams p = bench();
    const ConditionalMoments cm = sy_conditional_moments(p, 0.0, 0.5, 1.4);
    CHECK(sy_exact_increment(p, 0.0, 0.5, 1.4, 0.0) == cm.mean);

    ShimizuYamadaParams flat = bench();
    flat.sigma = 0.0;
    CHECK(sy_exact_increment(flat, 0.0, 0.5, 1.4, 2.0) ==
          sy_exact_increment(flat, 0.0, 0.5, 1.4, -3.0));
}

TEST_CASE("call and put rewards: discounting folded into the payoff") {
    const ShimizuYamadaParams p{1.0, 0.2, 1.0, 0.0, 0.1};  // r = 0
    const auto [lo, hi] = sy_state_box(p);
    const RewardSpec call = make_call_reward(p, 10, 1.0, lo, hi);
    std::vector<double> x{1.0};
    CHECK(call.payoff(3, x) == doctest::Approx(0.9).epsilon(1e-14));
    x[0] = 0.05;
    CHECK(call.payoff(3, x) == 0.0);

    ShimizuYamadaParams pr = p;
    pr.rate = 0.05;
    const RewardSpec disc = make_call_reward(pr, 10, 1.0, lo, hi);
    x[0] = 1.0;
    CHECK(disc.payoff(10, x) == doctest::Approx(std::exp(-0.05) * 0.9).epsilon(1e-14));

    const RewardSpec put = make_put_reward(pr, 10, 1.0, lo, hi);
    x[0] = 0.05;
    CHECK(put.payoff(10, x) == doctest::Approx(std::exp(-0.05) * 0.05).epsilon(1e-14));

    const RewardSpec c = make_constant_reward(2.5, 4);
    CHECK(c.payoff(1, x) == 2.5);
    CHECK(c.payoff(4, x) == 2.5);
    CHECK(c.payoff_lipschitz == 0.0);
}

TEST_CASE("state box is symmetric around x0") {
    const auto [lo, hi] = sy_state_box(bench(), 6.0);
    CHECK(lo == doctest::Approx(1.0 - 6.0 * 0.2 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(hi == doctest::Approx(1.0 + 6.0 * 0.2 / std::sqrt(2.0)).epsilon(1e-14));
}
