// SPDX-License-Identifier: Apache-2.0
#pragma once

// Linear least squares with spectral diagnostics, the truncation operator,
// and the perturbation laboratory: a pseudoinverse perturbation inequality
// checked instance-by-instance, the perturbation constants (c1, c2), and an
// empirical eigenvalue-concentration experiment.

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <vector>

namespace mvstop {

struct FitOptions {
    // Singular when lambda_min <= rank_tol_factor * lambda_max of the
    // (1/N) Z^T Z Gram.
    double rank_tol_factor = 1e-10;
    // Fall back to a ridge-stabilized solve instead of failing; the report
    // is flagged. Penalty: ridge_scale * trace(Gram) / K.
    bool allow_ridge = false;
    double ridge_scale = 1e-8;
    // Diagnostic eigenvalue window for the report's cond_window_ok flag.
    double kappa_lo = 0.0;
    double kappa_hi = std::numeric_limits<double>::infinity();
};

struct FitReport {
    Eigen::VectorXd beta;
    double lambda_min = 0.0;  // of the normalized Gram (1/N) Z^T Z
    double lambda_max = 0.0;
    bool cond_window_ok = true;
    int n_samples = 0;
    double truncation_level = 0.0;  // filled by callers that truncate
    bool ridge_fallback = false;
};

// QR-based least squares; beta minimizes |targets - design * beta|^2.
// Throws SingularFitError (carrying lambda_min) on rank deficiency unless
// options.allow_ridge is set.
FitReport fit_ls(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                 const FitOptions& options = {});

// Clip to [-level, level]; level >= 0 (level == 0 is the degenerate clamp
// to zero, callers treat 0 as "disabled" where that is meant).
double truncate(double value, double level);

struct PerturbationParams {
    double rho = 0.5;        // > 0
    double epsilon = 0.25;   // > 0
    double delta = 0.05;     // in (0,1)
    double abs_const = 1.0;  // the concentration lemma's absolute constant C
    double row_bound = 1.0;  // M with |U_1| <= M
};

struct PinvCheck {
    bool condition_holds = false;
    double bound = 0.0;
    double actual = 0.0;
};

// Checks lambda_min(Z^T Z) - (2|Z| + 1)|E| > rho and |E| < 1; when that
// holds, the pseudoinverse difference obeys
//   |(Z+E)^+ - Z^+|  <=  (|E|/rho) [1 + (2|Z| + 1)|Z| / rho].
// `actual` is computed from the SVD-based pseudoinverses (operator 2-norm).
PinvCheck pinv_perturbation_check(const Eigen::MatrixXd& z, const Eigen::MatrixXd& e,
                                  double rho);

// c1 = 1/rho + (2(lmax + eps) + sqrt(lmax + eps)) / rho^2,
// c2 = c1 + sqrt(lmax + eps) / (lmin - eps); requires
// 0 < rho < lmin and 0 < eps < lmin - rho.
std::pair<double, double> perturbation_constants(double lambda_min_sigma,
                                                 double lambda_max_sigma, double epsilon,
                                                 double rho);

// Corollary parameterization eps = rho = lmin / 4.
std::pair<double, double> perturbation_constants_corollary(double lambda_min_sigma,
                                                           double lambda_max_sigma);

// eps_{delta,N} = M sqrt(log(2d/delta) / (N C)) lmax^{3/2}(Sigma) / lmin(Sigma).
double concentration_epsilon(int d, int n, double row_bound, double delta, double abs_const,
                             double lambda_min_sigma, double lambda_max_sigma);

// Draws n_trials samples of N vectors uniform on the radius-M sphere in R^d
// (so Sigma = (M^2/d) I), and returns the frequency with which an extreme
// eigenvalue of (1/N) sum X_i X_i^T escapes [lmin - eps, lmax + eps]. The
// lemma predicts a rate <= delta conditionally on the configured C.
double concentration_experiment(int d, int n, double row_bound, double delta, double abs_const,
                                int n_trials, std::uint64_t seed, int workers = -1);

double concentration_experiment(int d, int n, const PerturbationParams& params, int n_trials,
                                std::uint64_t seed, int workers = -1);

struct PertLabRow {
    int trial = 0;
    bool condition_holds = false;
    double bound = 0.0;
    double actual = 0.0;
    bool violated = false;
};

// Randomized instances satisfying the perturbation condition by
// construction: Gaussian Z scaled to lambda_min(Z^T Z) >= 2, E scaled so the
// condition holds at the given rho.
std::vector<PertLabRow> pinv_perturbation_suite(int n_instances, int rows, int cols, double rho,
                                                std::uint64_t seed, int workers = -1);

}  // namespace mvstop
