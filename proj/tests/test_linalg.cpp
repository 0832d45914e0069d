// SPDX-License-Identifier: Apache-2.0
#include "mvstop/linalg.hpp"
#include "mvstop/quadrature.hpp"
#include "mvstop/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace mvstop;

TEST_CASE("symmetric eigen range on a known matrix") {
    Eigen::MatrixXd m(2, 2);
    m << 2.0, 1.0, 1.0, 2.0;  // eigenvalues 1 and 3
    const EigenRange r = symmetric_eigen_range(m);
    CHECK(r.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.lambda_max == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("operator norm equals the largest singular value") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -5.0;
    CHECK(op_norm(d) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(op_norm(d.transpose()) == doctest::Approx(5.0).epsilon(1e-12));

    const rng::NormalField field(11, 0);
    Eigen::MatrixXd g(30, 5);
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 5; ++j) g(i, j) = field.normal(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
    CHECK(op_norm(g) == doctest::Approx(svd.singularValues().maxCoeff()).epsilon(1e-12));
}

TEST_CASE("pseudo inverse satisfies the Moore-Penrose identities") {
    const rng::NormalField field(5, 0);
    Eigen::MatrixXd z(20, 4);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 4; ++j) z(i, j) = field.normal(i, j);
    const Eigen::MatrixXd pinv = pseudo_inverse(z);
    CHECK((z * pinv * z - z).norm() < 1e-11 * z.norm());
    CHECK((pinv * z * pinv - pinv).norm() < 1e-11 * pinv.norm());
    CHECK((pinv * z - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("gauss hermite rule integrates against exp(-x^2)") {
    const double sqrt_pi = std::sqrt(3.14159265358979323846);
    for (int n : {20, 64, 128, 200}) {
        const GaussHermiteRule rule = gauss_hermite(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        double w = 0.0, x2 = 0.0, x4 = 0.0;
        for (int i = 0; i < n; ++i) {
            w += rule.weights[i];
            x2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
            x4 += rule.weights[i] * std::pow(rule.nodes[i], 4);
        }
        CHECK(w == doctest::Approx(sqrt_pi).epsilon(1e-13));          // mu_0
        CHECK(x2 == doctest::Approx(sqrt_pi / 2.0).epsilon(1e-12));   // x^2 moment
        CHECK(x4 == doctest::Approx(0.75 * sqrt_pi).epsilon(1e-12));  // x^4 moment
        // Symmetry of nodes.
        for (int i = 0; i < n / 2; ++i)
            CHECK(rule.nodes[i] == -rule.nodes[static_cast<std::size_t>(n) - 1 - i]);
    }
}

TEST_CASE("gaussian expectation helper matches closed forms") {
    const GaussHermiteRule rule = gauss_hermite(40);
    const double mean = 1.3, sd = 0.7;
    CHECK(rule.gaussian_expectation(mean, sd, [](double x) { return x; }) ==
          doctest::Approx(mean).epsilon(1e-12));
    CHECK(rule.gaussian_expectation(mean, sd, [](double x) { return x * x; }) ==
          doctest::Approx(mean * mean + sd * sd).epsilon(1e-12));
    // E[e^X] = e^{mean + sd^2/2} for lognormal moments.
    CHECK(rule.gaussian_expectation(mean, sd, [](double x) { return std::exp(x); }) ==
          doctest::Approx(std::exp(mean + 0.5 * sd * sd)).epsilon(1e-10));
}
