// SPDX-License-Identifier: Apache-2.0
#include "mvstop/regression.hpp"

#include "mvstop/errors.hpp"
#include "mvstop/linalg.hpp"
#include "mvstop/numerics.hpp"
#include "mvstop/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mvstop {

FitReport fit_ls(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                 const FitOptions& options) {
    const Eigen::Index n = design.rows();
    const Eigen::Index k = design.cols();
    if (n < 1 || k < 1) throw std::invalid_argument("fit_ls: empty design");
    if (targets.size() != n) throw std::invalid_argument("fit_ls: target size mismatch");
    if (n < k) throw std::invalid_argument("fit_ls: need n_samples >= n_basis");

    FitReport report;
    report.n_samples = static_cast<int>(n);

    const Eigen::MatrixXd gram = (design.transpose() * design) / static_cast<double>(n);
    const EigenRange range = symmetric_eigen_range(gram);
    report.lambda_min = range.lambda_min;
    report.lambda_max = range.lambda_max;
    report.cond_window_ok =
        range.lambda_min >= options.kappa_lo && range.lambda_max <= options.kappa_hi;

    const bool singular =
        !(range.lambda_max > 0.0) || range.lambda_min <= options.rank_tol_factor * range.lambda_max;
    if (!singular) {
        report.beta = design.householderQr().solve(targets);
        return report;
    }
    if (!options.allow_ridge)
        throw SingularFitError("fit_ls: rank-deficient design (lambda_min = " +
                                   std::to_string(range.lambda_min) + ")",
                               range.lambda_min);
    const double penalty = options.ridge_scale * gram.trace() / static_cast<double>(k);
    Eigen::MatrixXd ridged = gram;
    ridged.diagonal().array() += penalty;
    const Eigen::VectorXd rhs = design.transpose() * targets / static_cast<double>(n);
    report.beta = ridged.ldlt().solve(rhs);
    report.ridge_fallback = true;
    return report;
}

double truncate(double value, double level) {
    if (level < 0.0) throw std::invalid_argument("truncate: level must be >= 0");
    return std::min(level, std::max(-level, value));
}

PinvCheck pinv_perturbation_check(const Eigen::MatrixXd& z, const Eigen::MatrixXd& e,
                                  double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("pinv_perturbation_check: rho must be > 0");
    if (z.rows() <= z.cols())
        throw std::invalid_argument("pinv_perturbation_check: need rows > cols");
    if (e.rows() != z.rows() || e.cols() != z.cols())
        throw std::invalid_argument("pinv_perturbation_check: shape mismatch");

    const double z_norm = op_norm(z);
    const double e_norm = op_norm(e);
    const double lambda_min = symmetric_eigen_range(z.transpose() * z).lambda_min;

    PinvCheck out;
    out.condition_holds =
        (lambda_min - (2.0 * z_norm + 1.0) * e_norm > rho) && (e_norm < 1.0);
    out.bound = (e_norm / rho) * (1.0 + (2.0 * z_norm + 1.0) * z_norm / rho);
    out.actual = op_norm(pseudo_inverse(z + e) - pseudo_inverse(z));
    return out;
}

std::pair<double, double> perturbation_constants(double lambda_min_sigma,
                                                 double lambda_max_sigma, double epsilon,
                                                 double rho) {
    if (!(lambda_min_sigma > 0.0) || lambda_max_sigma < lambda_min_sigma)
        throw std::invalid_argument("perturbation_constants: need 0 < lmin <= lmax");
    if (!(rho > 0.0) || !(rho < lambda_min_sigma))
        throw std::invalid_argument("perturbation_constants: need 0 < rho < lambda_min");
    if (!(epsilon > 0.0) || !(epsilon < lambda_min_sigma - rho))
        throw std::invalid_argument("perturbation_constants: need 0 < epsilon < lambda_min - rho");
    const double top = lambda_max_sigma + epsilon;
    const double c1 = 1.0 / rho + (2.0 * top + std::sqrt(top)) / (rho * rho);
    const double c2 = c1 + std::sqrt(top) / (lambda_min_sigma - epsilon);
    return {c1, c2};
}

std::pair<double, double> perturbation_constants_corollary(double lambda_min_sigma,
                                                           double lambda_max_sigma) {
    const double q = lambda_min_sigma / 4.0;
    return perturbation_constants(lambda_min_sigma, lambda_max_sigma, q, q);
}

double concentration_epsilon(int d, int n, double row_bound, double delta, double abs_const,
                             double lambda_min_sigma, double lambda_max_sigma) {
    if (d < 1 || n < 1) throw std::invalid_argument("concentration_epsilon: need d, n >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("concentration_epsilon: delta must be in (0,1)");
    if (!(abs_const > 0.0))
        throw std::invalid_argument("concentration_epsilon: abs_const must be > 0");
    const double root = row_bound * std::sqrt(std::log(2.0 * d / delta) / (n * abs_const));
    if (root > std::sqrt(lambda_max_sigma))
        throw std::invalid_argument(
            "concentration_epsilon: N too small for the stated condition");
    return root * std::pow(lambda_max_sigma, 1.5) / lambda_min_sigma;
}

double concentration_experiment(int d, int n, double row_bound, double delta, double abs_const,
                                int n_trials, std::uint64_t seed, int workers) {
    if (n_trials < 0) throw std::invalid_argument("concentration_experiment: n_trials >= 0");
    if (n_trials == 0) return 0.0;
    const double lambda = row_bound * row_bound / d;  // Sigma = (M^2/d) I
    const double eps = concentration_epsilon(d, n, row_bound, delta, abs_const, lambda, lambda);

    const rng::NormalField field(seed, 0x636f6e63ull);
    std::vector<unsigned char> exceeded(static_cast<std::size_t>(n_trials), 0);

    parallel_for(static_cast<std::size_t>(n_trials), workers, [&](std::size_t lo, std::size_t hi) {
        Eigen::MatrixXd gramsum(d, d);
        Eigen::VectorXd x(d);
        for (std::size_t t = lo; t < hi; ++t) {
            gramsum.setZero();
            for (int i = 0; i < n; ++i) {
                double norm2 = 0.0;
                for (int l = 0; l < d; ++l) {
                    x[l] = field.normal(t, (static_cast<std::uint64_t>(i) * d + l));
                    norm2 += x[l] * x[l];
                }
                if (norm2 == 0.0) x[0] = norm2 = 1.0;  // measure-zero guard
                x *= row_bound / std::sqrt(norm2);
                gramsum.noalias() += x * x.transpose();
            }
            const EigenRange r = symmetric_eigen_range(gramsum / n);
            if (r.lambda_max > lambda + eps || r.lambda_min < lambda - eps) exceeded[t] = 1;
        }
    });

    long count = 0;
    for (unsigned char f : exceeded) count += f;
    return static_cast<double>(count) / n_trials;
}

double concentration_experiment(int d, int n, const PerturbationParams& params, int n_trials,
                                std::uint64_t seed, int workers) {
    return concentration_experiment(d, n, params.row_bound, params.delta, params.abs_const,
                                    n_trials, seed, workers);
}

std::vector<PertLabRow> pinv_perturbation_suite(int n_instances, int rows, int cols, double rho,
                                                std::uint64_t seed, int workers) {
    if (n_instances < 0) throw std::invalid_argument("pinv_perturbation_suite: n_instances >= 0");
    if (rows <= cols || cols < 1)
        throw std::invalid_argument("pinv_perturbation_suite: need rows > cols >= 1");
    if (!(rho > 0.0) || rho >= 2.0)
        throw std::invalid_argument("pinv_perturbation_suite: need 0 < rho < 2 (instances scale "
                                    "lambda_min to 2)");

    const rng::NormalField field(seed, 0x70696e76ull);
    std::vector<PertLabRow> out(static_cast<std::size_t>(n_instances));

    parallel_for(static_cast<std::size_t>(n_instances), workers,
                 [&](std::size_t lo, std::size_t hi) {
        Eigen::MatrixXd z(rows, cols), e(rows, cols);
        for (std::size_t t = lo; t < hi; ++t) {
            std::uint64_t ctr = 0;
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) z(i, j) = field.normal(2 * t, ctr++);
            // Scale so lambda_min(Z^T Z) lands just above 2.
            const double lmin = symmetric_eigen_range(z.transpose() * z).lambda_min;
            z *= std::sqrt(2.0 * (1.0 + 1e-9) / lmin);
            const double lmin_scaled = symmetric_eigen_range(z.transpose() * z).lambda_min;
            const double z_norm = op_norm(z);

            ctr = 0;
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) e(i, j) = field.normal(2 * t + 1, ctr++);
            const double frac = 0.05 + 0.9 * field.uniform(2 * t + 1, ctr);
            const double max_e =
                std::min(0.999, 0.999 * (lmin_scaled - rho) / (2.0 * z_norm + 1.0));
            e *= frac * max_e / op_norm(e);

            const PinvCheck chk = pinv_perturbation_check(z, e, rho);
            PertLabRow row;
            row.trial = static_cast<int>(t);
            row.condition_holds = chk.condition_holds;
            row.bound = chk.bound;
            row.actual = chk.actual;
            row.violated = chk.condition_holds && chk.actual > chk.bound * (1.0 + 1e-12);
            out[t] = row;
        }
    });
    return out;
}

}  // namespace mvstop
