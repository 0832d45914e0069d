// SPDX-License-Identifier: Apache-2.0
#include "mvstop/errors.hpp"
#include "mvstop/linalg.hpp"
#include "mvstop/numerics.hpp"
#include "mvstop/regression.hpp"
#include "mvstop/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace mvstop;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
    const rng::NormalField field(seed, 0);
    Eigen::MatrixXd m(rows, cols);
    std::uint64_t c = 0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = field.normal(0, c++);
    return m;
}

}  // namespace

TEST_CASE("fit_ls: identity design returns the targets") {
    const int k = 5;
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd y(k);
    y << 1.0, -2.0, 0.5, 3.0, 0.0;
    const FitReport r = fit_ls(z, y);
    CHECK((r.beta - y).norm() < 1e-12);
    CHECK(r.lambda_min == doctest::Approx(1.0 / k).epsilon(1e-12));
}

TEST_CASE("fit_ls: noiseless recovery of a planted coefficient vector") {
    const Eigen::MatrixXd z = random_matrix(200, 6, 99);
    Eigen::VectorXd beta_star(6);
    beta_star << 0.3, -1.2, 2.0, 0.0, 4.5, -0.7;
    const Eigen::VectorXd y = z * beta_star;
    const FitReport r = fit_ls(z, y);
    CHECK((r.beta - beta_star).norm() <= 1e-8 * beta_star.norm());
    CHECK_FALSE(r.ridge_fallback);
}

TEST_CASE("fit_ls: constant-only design gives the sample mean") {
    Eigen::MatrixXd z = Eigen::MatrixXd::Ones(400, 1);
    Eigen::VectorXd y(400);
    const rng::NormalField field(4, 0);
    for (int i = 0; i < 400; ++i) y[i] = field.normal(0, static_cast<std::uint64_t>(i));
    const FitReport r = fit_ls(z, y);
    std::vector<double> ys(y.data(), y.data() + y.size());
    CHECK(r.beta[0] == doctest::Approx(mean_var(ys).mean).epsilon(1e-12));
}

TEST_CASE("fit_ls: residual is orthogonal to the column space") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
        const Eigen::MatrixXd z = random_matrix(120, 5, seed);
        Eigen::VectorXd y = random_matrix(120, 1, seed + 100).col(0);
        const FitReport r = fit_ls(z, y);
        const Eigen::VectorXd resid = z.transpose() * (z * r.beta - y);
        CHECK(resid.norm() <= 1e-8 * op_norm(z) * y.norm());
    }
}

TEST_CASE("fit_ls: scaling targets scales beta (exactly for powers of two)") {
    const Eigen::MatrixXd z = random_matrix(80, 4, 7);
    const Eigen::VectorXd y = random_matrix(80, 1, 8).col(0);
    const FitReport base = fit_ls(z, y);
    for (double s : {0.5, 4.0}) {
        const FitReport scaled = fit_ls(z, (s * y).eval());
        for (int i = 0; i < 4; ++i) CHECK(scaled.beta[i] == s * base.beta[i]);
    }
    const FitReport three = fit_ls(z, (3.0 * y).eval());
    CHECK((three.beta - 3.0 * base.beta).norm() <= 1e-13 * base.beta.norm());
}

TEST_CASE("fit_ls: rank deficiency errors or ridge-stabilizes") {
    Eigen::MatrixXd z(50, 3);
    const Eigen::MatrixXd g = random_matrix(50, 2, 12);
    z.col(0) = g.col(0);
    z.col(1) = g.col(1);
    z.col(2) = 2.0 * g.col(0);  // exact collinearity
    const Eigen::VectorXd y = random_matrix(50, 1, 13).col(0);
    CHECK_THROWS_AS(fit_ls(z, y), SingularFitError);
    try {
        fit_ls(z, y);
    } catch (const SingularFitError& e) {
        CHECK(e.lambda_min <= 1e-10);
    }
    FitOptions opts;
    opts.allow_ridge = true;
    const FitReport r = fit_ls(z, y, opts);
    CHECK(r.ridge_fallback);
    CHECK(r.beta.allFinite());

    CHECK_THROWS_AS(fit_ls(random_matrix(3, 5, 1), Eigen::VectorXd::Zero(3).eval()),
                    std::invalid_argument);  // n < k
}

TEST_CASE("fit_ls: diagnostic eigenvalue window flag") {
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(8, 2);  // Gram = I/8
    const Eigen::VectorXd y = Eigen::VectorXd::Ones(8);
    FitOptions inside;
    inside.kappa_lo = 0.05;
    inside.kappa_hi = 1.0;
    CHECK(fit_ls(z, y, inside).cond_window_ok);
    FitOptions outside;
    outside.kappa_lo = 0.5;  // lambda_min = 1/8 falls below
    CHECK_FALSE(fit_ls(z, y, outside).cond_window_ok);
}

TEST_CASE("concentration experiment accepts the parameter struct") {
    PerturbationParams params;
    params.delta = 2.0 * std::exp(-2.0);
    params.abs_const = 1.0;
    params.row_bound = 1.0;
    CHECK(concentration_experiment(1, 800, params, 30, 7) ==
          concentration_experiment(1, 800, 1.0, params.delta, 1.0, 30, 7));
}

TEST_CASE("truncate: clipping, idempotence, 1-Lipschitz") {
    CHECK(truncate(2.0, 1.0) == 1.0);
    CHECK(truncate(-0.5, 1.0) == -0.5);
    CHECK(truncate(-3.0, 1.0) == -1.0);
    CHECK_THROWS_AS(truncate(1.0, -0.5), std::invalid_argument);
    const rng::NormalField field(6, 0);
    for (int i = 0; i < 200; ++i) {
        const double a = 3.0 * field.normal(0, 2 * static_cast<std::uint64_t>(i));
        const double b = 3.0 * field.normal(0, 2 * static_cast<std::uint64_t>(i) + 1);
        const double m = std::abs(field.normal(1, static_cast<std::uint64_t>(i)));
        CHECK(truncate(truncate(a, m), m) == truncate(a, m));
        CHECK(std::abs(truncate(a, m) - truncate(b, m)) <= std::abs(a - b) + 1e-15);
    }
}

TEST_CASE("pinv perturbation: zero perturbation is exactly tight") {
    const Eigen::MatrixXd z = 2.0 * random_matrix(30, 4, 3);
    const PinvCheck chk = pinv_perturbation_check(z, Eigen::MatrixXd::Zero(30, 4), 0.5);
    CHECK(chk.bound == 0.0);
    CHECK(chk.actual <= 1e-12);
}

TEST_CASE("pinv perturbation: closed form for E = c Z with orthonormal columns") {
    // QR of a random tall matrix gives orthonormal columns; then
    // (Z + cZ)^+ = Z^+ / (1+c) and |Z^+| = 1.
    const Eigen::MatrixXd g = random_matrix(40, 3, 17);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(40, 3);
    const double c = 0.04;
    const PinvCheck chk = pinv_perturbation_check(q, (c * q).eval(), 0.5);
    CHECK(chk.condition_holds);  // lambda_min = 1, |E| = c small
    CHECK(chk.actual == doctest::Approx(c / (1.0 + c)).epsilon(1e-10));
    CHECK(chk.actual <= chk.bound);
}

TEST_CASE("pinv perturbation: randomized suite has zero violations") {
    const auto rows = pinv_perturbation_suite(200, 40, 5, 0.5, 2024);
    int held = 0;
    for (const auto& r : rows) {
        CHECK_FALSE(r.violated);
        if (r.condition_holds) {
            ++held;
            CHECK(r.actual <= r.bound * (1.0 + 1e-12));
        }
    }
    CHECK(held == 200);  // construction satisfies the condition
}

TEST_CASE("perturbation constants: frozen corollary values at Sigma = I") {
    const auto [c1, c2] = perturbation_constants(1.0, 1.0, 0.25, 0.25);
    // Independent algebraic route: c1 = 44 + 8 sqrt(5), c2 = c1 + 2 sqrt(5) / 3.
    const double c1_ref = 44.0 + 8.0 * std::sqrt(5.0);
    const double c2_ref = c1_ref + 2.0 * std::sqrt(5.0) / 3.0;
    CHECK(std::abs(c1 - c1_ref) <= 1e-9 * c1_ref);
    CHECK(std::abs(c2 - c2_ref) <= 1e-9 * c2_ref);
    const auto cor = perturbation_constants_corollary(1.0, 1.0);
    CHECK(cor.first == c1);
    CHECK(cor.second == c2);
}

TEST_CASE("perturbation constants: window checks and monotonicity") {
    CHECK_THROWS_AS(perturbation_constants(1.0, 1.0, 0.0, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(perturbation_constants(1.0, 1.0, 0.25, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(perturbation_constants(1.0, 1.0, 0.8, 0.25), std::invalid_argument);
    const auto a = perturbation_constants(2.0, 3.0, 0.25, 0.5);
    const auto b = perturbation_constants(2.0, 3.0, 0.25, 1.0);
    CHECK(b.first < a.first);  // doubling rho decreases c1
    // c2 >= c1 across a parameter scan.
    for (double lmax : {1.0, 2.0, 5.0})
        for (double rho : {0.2, 0.4})
            for (double eps : {0.1, 0.3}) {
                const auto [c1, c2] = perturbation_constants(1.0, lmax, eps, rho);
                CHECK(c2 >= c1);
            }
}

TEST_CASE("concentration: epsilon formula and degenerate d = 1") {
    // d=1, M=1, delta = 2/e^2 so log(2d/delta) = 2, N = 800, C = 1, Sigma = 1.
    const double delta = 2.0 * std::exp(-2.0);
    const double eps = concentration_epsilon(1, 800, 1.0, delta, 1.0, 1.0, 1.0);
    CHECK(eps == doctest::Approx(0.05).epsilon(1e-12));

    const double rate = concentration_experiment(1, 800, 1.0, delta, 1.0, 50, 7);
    CHECK(rate == 0.0);

    // Condition on N fails when N is tiny.
    CHECK_THROWS_AS(concentration_epsilon(5, 2, 1.0, 0.05, 0.1, 0.2, 0.2),
                    std::invalid_argument);
}

TEST_CASE("concentration: empirical exceedance within the predicted level") {
    const double rate = concentration_experiment(5, 2000, 1.0, 0.05, 0.1, 100, 99);
    CHECK(rate <= 0.05);
}
