// SPDX-License-Identifier: Apache-2.0
#include "mvstop/stopping.hpp"

#include "mvstop/errors.hpp"
#include "mvstop/numerics.hpp"
#include "mvstop/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mvstop {

namespace {

constexpr std::uint64_t kInnerPurpose = 0x696e6e72ull;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_paths(const ParticlePaths& paths, const RewardSpec& rewards) {
    if (paths.num_dates != rewards.num_dates)
        throw std::invalid_argument("stopping: paths and rewards disagree on the date count");
    if (paths.n_particles < 1) throw std::invalid_argument("stopping: empty path set");
}

struct DateFit {
    std::vector<double> beta;
    double level = 0.0;
    FitReport report;
};

// One regression date: build the design on Z_j, fit targets, resolve the
// truncation level.
DateFit fit_date(const ParticlePaths& paths, const RewardSpec& rewards, const BasisSet& basis,
                 int date, const std::vector<double>& targets, const TrainOptions& options) {
    const int n = paths.n_particles;
    if (n < basis.size)
        throw std::invalid_argument("stopping: n_samples < basis size at date " +
                                    std::to_string(date));

    std::vector<int> rows;
    rows.reserve(static_cast<std::size_t>(n));
    if (options.itm_filter) {
        for (int i = 0; i < n; ++i)
            if (rewards.payoff(date, paths.date_state(i, date)) > 0.0) rows.push_back(i);
        if (static_cast<int>(rows.size()) < std::max(basis.size, 2)) rows.clear();
    }
    const bool filtered = !rows.empty();
    const int nr = filtered ? static_cast<int>(rows.size()) : n;

    Eigen::MatrixXd design(nr, basis.size);
    Eigen::VectorXd y(nr);
    std::vector<double> psi(static_cast<std::size_t>(basis.size));
    for (int r = 0; r < nr; ++r) {
        const int i = filtered ? rows[static_cast<std::size_t>(r)] : r;
        basis.eval(paths.date_state(i, date), psi);
        for (int c = 0; c < basis.size; ++c) design(r, c) = psi[static_cast<std::size_t>(c)];
        y[r] = targets[static_cast<std::size_t>(i)];
    }

    DateFit out;
    try {
        out.report = fit_ls(design, y, options.fit);
    } catch (const SingularFitError& err) {
        throw SingularFitError("date " + std::to_string(date) + ": " + err.what(),
                               err.lambda_min);
    }
    out.beta.assign(out.report.beta.data(), out.report.beta.data() + out.report.beta.size());

    if (options.truncation > 0.0) {
        out.level = options.truncation;
    } else if (options.truncation < 0.0) {
        double m = 0.0;
        for (double t : targets) m = std::max(m, std::abs(t));
        out.level = m;
    }
    out.report.truncation_level = out.level;
    return out;
}

Policy train_backward(const ParticlePaths& paths, const RewardSpec& rewards,
                      const BasisFamily& basis, const TrainOptions& options, bool tvr_mode) {
    check_paths(paths, rewards);
    const int n = paths.n_particles;
    const int num_dates = rewards.num_dates;

    Policy policy;
    policy.mode = tvr_mode ? PolicyMode::tvr : PolicyMode::prmc_ls;
    policy.num_dates = num_dates;
    policy.truncation_input = options.truncation;
    policy.basis_descriptor = basis.descriptor;
    if (num_dates == 1) return policy;  // stop at date 1 always

    policy.truncation_levels.resize(static_cast<std::size_t>(num_dates) - 1);
    policy.coefficients.resize(static_cast<std::size_t>(num_dates) - 1);
    policy.bases.resize(static_cast<std::size_t>(num_dates) - 1);
    policy.fits.resize(static_cast<std::size_t>(num_dates) - 1);

    // PRMC carries realized cash flows g_{tau}(Z_tau); TvR carries the
    // previous date's value estimate max(g, truncated fit).
    std::vector<double> carry(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        carry[static_cast<std::size_t>(i)] = rewards.payoff(num_dates, paths.date_state(i, num_dates));

    std::vector<double> psi;
    for (int j = num_dates - 1; j >= 1; --j) {
        const BasisSet bs = basis.at(j);
        const DateFit fit = fit_date(paths, rewards, bs, j, carry, options);
        const std::size_t idx = static_cast<std::size_t>(j) - 1;
        policy.truncation_levels[idx] = fit.level;
        policy.coefficients[idx] = fit.beta;
        policy.bases[idx] = bs;
        policy.fits[idx] = fit.report;

        psi.resize(static_cast<std::size_t>(bs.size));
        for (int i = 0; i < n; ++i) {
            const auto x = paths.date_state(i, j);
            bs.eval(x, psi);
            double c = dot(fit.beta, psi);
            if (fit.level > 0.0) c = truncate(c, fit.level);
            const double g = rewards.payoff(j, x);
            if (tvr_mode) {
                carry[static_cast<std::size_t>(i)] = std::max(g, c);
            } else if (g >= c) {  // ties exercise
                carry[static_cast<std::size_t>(i)] = g;
            }
        }
    }
    return policy;
}

}  // namespace

const char* to_string(PolicyMode mode) {
    switch (mode) {
        case PolicyMode::prmc_ls: return "prmc_ls";
        case PolicyMode::tvr: return "tvr";
        case PolicyMode::prmc_independent_batches: return "prmc_independent_batches";
    }
    return "unknown";
}

double Policy::continuation(int date, std::span<const double> x) const {
    if (date < 1 || date > num_dates)
        throw std::invalid_argument("Policy::continuation: date out of range");
    if (date == num_dates) return 0.0;
    const std::size_t idx = static_cast<std::size_t>(date) - 1;
    const BasisSet& bs = bases[idx];
    std::vector<double> psi(static_cast<std::size_t>(bs.size));
    bs.eval(x, psi);
    double c = dot(coefficients[idx], psi);
    const double level = truncation_levels[idx];
    if (level > 0.0) c = truncate(c, level);
    return c;
}

int Policy::stopping_date(const RewardSpec& rewards, const ParticlePaths& paths,
                          int path) const {
    for (int j = 1; j < num_dates; ++j) {
        const auto x = paths.date_state(path, j);
        if (rewards.payoff(j, x) >= continuation(j, x)) return j;
    }
    return num_dates;  // C at the last date is identically 0 and g >= 0
}

Policy prmc_backward(const ParticlePaths& paths, const RewardSpec& rewards,
                     const BasisFamily& basis, const TrainOptions& options) {
    return train_backward(paths, rewards, basis, options, false);
}

Policy tvr_backward(const ParticlePaths& paths, const RewardSpec& rewards,
                    const BasisFamily& basis, const TrainOptions& options) {
    return train_backward(paths, rewards, basis, options, true);
}

Policy prmc_independent_batches(const ModelSpec& model, const RewardSpec& rewards,
                                const BasisFamily& basis, int n_per_batch, int n_steps,
                                std::uint64_t seed, const TrainOptions& options,
                                const SimOptions& sim) {
    const int num_dates = rewards.num_dates;
    Policy policy;
    policy.mode = PolicyMode::prmc_independent_batches;
    policy.num_dates = num_dates;
    policy.truncation_input = options.truncation;
    policy.basis_descriptor = basis.descriptor;
    if (num_dates == 1) return policy;

    policy.truncation_levels.resize(static_cast<std::size_t>(num_dates) - 1);
    policy.coefficients.resize(static_cast<std::size_t>(num_dates) - 1);
    policy.bases.resize(static_cast<std::size_t>(num_dates) - 1);
    policy.fits.resize(static_cast<std::size_t>(num_dates) - 1);

    std::vector<double> targets(static_cast<std::size_t>(n_per_batch));
    for (int j = num_dates - 1; j >= 1; --j) {
        const ParticlePaths batch = simulate_particles(
            model, n_per_batch, n_steps, num_dates,
            rng::derive(seed, kBatchSeedPurpose, static_cast<std::uint64_t>(j)), sim);
        // Cash flows on this batch from the rules already fitted for j+1..J-1.
        for (int i = 0; i < n_per_batch; ++i) {
            int tau = num_dates;
            for (int l = j + 1; l < num_dates; ++l) {
                const auto x = batch.date_state(i, l);
                if (rewards.payoff(l, x) >= policy.continuation(l, x)) {
                    tau = l;
                    break;
                }
            }
            targets[static_cast<std::size_t>(i)] =
                rewards.payoff(tau, batch.date_state(i, tau));
        }
        const BasisSet bs = basis.at(j);
        const DateFit fit = fit_date(batch, rewards, bs, j, targets, options);
        const std::size_t idx = static_cast<std::size_t>(j) - 1;
        policy.truncation_levels[idx] = fit.level;
        policy.coefficients[idx] = fit.beta;
        policy.bases[idx] = bs;
        policy.fits[idx] = fit.report;
    }
    return policy;
}

LowerEstimate evaluate_lower(const Policy& policy, const RewardSpec& rewards,
                             const ParticlePaths& test_paths, int workers) {
    check_paths(test_paths, rewards);
    if (test_paths.num_dates != policy.num_dates)
        throw std::invalid_argument("evaluate_lower: policy and paths disagree on dates");
    const int n = test_paths.n_particles;
    std::vector<double> payoff(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            const int tau = policy.stopping_date(rewards, test_paths, static_cast<int>(r));
            payoff[r] = rewards.payoff(tau, test_paths.date_state(static_cast<int>(r), tau));
        }
    });
    const MeanVar mv = mean_var(payoff);
    return {mv.mean, mv.se, n};
}

LowerEstimate evaluate_lower_fresh(const Policy& policy, const ModelSpec& model,
                                   const RewardSpec& rewards, int n_test, int n_steps,
                                   std::uint64_t seed, const SimOptions& sim) {
    const ParticlePaths paths =
        simulate_particles(model, n_test, n_steps, rewards.num_dates, seed, sim);
    return evaluate_lower(policy, rewards, paths, sim.workers);
}

UpperEstimate evaluate_dual_upper(const Policy& policy, const ModelSpec& model,
                                  const RewardSpec& rewards, const ParticlePaths& test_paths,
                                  int n_inner, std::uint64_t seed,
                                  const ParticlePaths* frozen_flow, int workers) {
    check_paths(test_paths, rewards);
    if (test_paths.num_dates != policy.num_dates)
        throw std::invalid_argument("evaluate_dual_upper: policy and paths disagree on dates");
    if (n_inner < 2) throw std::invalid_argument("evaluate_dual_upper: n_inner must be >= 2");
    const int num_dates = rewards.num_dates;
    const int n = test_paths.n_particles;
    const int d = test_paths.dim;
    const double horizon = model.horizon;
    const double date_dt = horizon / num_dates;

    const bool exact = model.sy.has_value();
    const ParticlePaths& flow = (frozen_flow != nullptr) ? *frozen_flow : test_paths;
    if (!exact) {
        if (flow.n_steps != test_paths.n_steps || flow.dim != d)
            throw std::invalid_argument("evaluate_dual_upper: frozen flow grid mismatch");
    }

    // Value surrogate: g at the last date, max(g, truncated fit) before it.
    auto vhat = [&](int date, std::span<const double> x) {
        const double g = rewards.payoff(date, x);
        return (date == num_dates) ? g : std::max(g, policy.continuation(date, x));
    };

    const rng::NormalField noise(seed, kInnerPurpose);
    const int spd = test_paths.steps_per_date();
    const double dt = horizon / test_paths.n_steps;
    const double sqdt = std::sqrt(dt);
    const int m = model.brownian_dim;

    std::vector<double> theta(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> inner(static_cast<std::size_t>(n_inner));
        std::vector<double> x(static_cast<std::size_t>(d));
        std::vector<double> drift(static_cast<std::size_t>(d));
        std::vector<double> diff(static_cast<std::size_t>(d) * m);
        for (std::size_t r = lo; r < hi; ++r) {
            double martingale = 0.0;
            double best = -std::numeric_limits<double>::infinity();
            for (int j = 1; j <= num_dates; ++j) {
                const auto z_prev = test_paths.date_state(static_cast<int>(r), j - 1);
                const auto z_now = test_paths.date_state(static_cast<int>(r), j);
                for (int l = 0; l < n_inner; ++l) {
                    const std::uint64_t base =
                        (static_cast<std::uint64_t>(j - 1) * n_inner + l);
                    if (exact) {
                        const ConditionalMoments cm = sy_conditional_moments(
                            *model.sy, (j - 1) * date_dt, j * date_dt, z_prev[0]);
                        x[0] = cm.mean +
                               std::sqrt(cm.var) * noise.normal(r, base);
                    } else {
                        std::copy(z_prev.begin(), z_prev.end(), x.begin());
                        const int k0 = (j - 1) * spd;
                        for (int k = 0; k < spd; ++k) {
                            const auto mean_flow = flow.mean_at(k0 + k);
                            model.drift_kernel(x, mean_flow, drift);
                            model.diff_kernel(x, mean_flow, diff);
                            for (int ld = 0; ld < d; ++ld) {
                                double dx = drift[static_cast<std::size_t>(ld)] * dt;
                                for (int mm = 0; mm < m; ++mm) {
                                    const double g = noise.normal(
                                        r, (base * spd + k) * m + mm);
                                    dx += diff[static_cast<std::size_t>(ld) * m + mm] * sqdt * g;
                                }
                                x[static_cast<std::size_t>(ld)] += dx;
                            }
                        }
                    }
                    inner[static_cast<std::size_t>(l)] = vhat(j, x);
                }
                const double inner_mean = pairwise_sum(inner) / n_inner;
                martingale += vhat(j, z_now) - inner_mean;
                best = std::max(best, rewards.payoff(j, z_now) - martingale);
            }
            theta[r] = best;
        }
    });
    const MeanVar mv = mean_var(theta);
    return {mv.mean, mv.se, n, n_inner};
}

BoundsEstimate evaluate_bounds(const Policy& policy, const ModelSpec& model,
                               const RewardSpec& rewards, const ParticlePaths& test_paths,
                               int n_inner, std::uint64_t seed,
                               const ParticlePaths* frozen_flow, int workers) {
    const LowerEstimate lower = evaluate_lower(policy, rewards, test_paths, workers);
    const UpperEstimate upper = evaluate_dual_upper(policy, model, rewards, test_paths, n_inner,
                                                    seed, frozen_flow, workers);
    BoundsEstimate out;
    out.lower = lower.value;
    out.lower_se = lower.se;
    out.upper = upper.value;
    out.upper_se = upper.se;
    out.n_test = lower.n_test;
    out.n_inner = upper.n_inner;
    return out;
}

std::string format_cell(double value, double se) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f(%.4f)", value, se);
    return buf;
}

std::string policy_to_json(const Policy& policy) {
    nlohmann::json j;
    j["mode"] = to_string(policy.mode);
    j["num_dates"] = policy.num_dates;
    j["truncation_input"] = policy.truncation_input;
    j["truncation_levels"] = policy.truncation_levels;
    j["basis"] = {{"kind", policy.basis_descriptor.kind},
                  {"param", policy.basis_descriptor.param}};
    j["coefficients"] = policy.coefficients;
    nlohmann::json lmin = nlohmann::json::array();
    nlohmann::json lmax = nlohmann::json::array();
    nlohmann::json ridge = nlohmann::json::array();
    for (const FitReport& f : policy.fits) {
        lmin.push_back(f.lambda_min);
        lmax.push_back(f.lambda_max);
        ridge.push_back(f.ridge_fallback);
    }
    j["lambda_min"] = lmin;
    j["lambda_max"] = lmax;
    j["ridge_fallback"] = ridge;
    // Basis diagnostics: per-date sup bound M_K and Lipschitz aggregate.
    nlohmann::json sup = nlohmann::json::array();
    nlohmann::json ell = nlohmann::json::array();
    for (const BasisSet& b : policy.bases) {
        sup.push_back(b.sup_bound);
        ell.push_back(b.ell);
    }
    j["basis_sup_bound"] = sup;
    j["basis_ell"] = ell;
    return j.dump(2);
}

Policy policy_from_json(const std::string& text, const BasisFamily& basis) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Policy p;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "prmc_ls") p.mode = PolicyMode::prmc_ls;
    else if (mode == "tvr") p.mode = PolicyMode::tvr;
    else if (mode == "prmc_independent_batches") p.mode = PolicyMode::prmc_independent_batches;
    else throw ConfigError("policy json: unknown mode '" + mode + "'");
    p.num_dates = j.at("num_dates").get<int>();
    p.truncation_input = j.at("truncation_input").get<double>();
    p.truncation_levels = j.at("truncation_levels").get<std::vector<double>>();
    p.coefficients = j.at("coefficients").get<std::vector<std::vector<double>>>();
    p.basis_descriptor = {j.at("basis").at("kind").get<std::string>(),
                          j.at("basis").at("param").get<int>()};
    if (basis.descriptor.kind != p.basis_descriptor.kind ||
        basis.descriptor.param != p.basis_descriptor.param)
        throw ConfigError("policy json: basis descriptor mismatch");
    const std::size_t k = static_cast<std::size_t>(p.num_dates) - 1;
    if (p.coefficients.size() != k || p.truncation_levels.size() != k)
        throw ConfigError("policy json: per-date array sizes inconsistent");
    p.bases.resize(k);
    p.fits.resize(k);
    for (int date = 1; date < p.num_dates; ++date) {
        p.bases[static_cast<std::size_t>(date) - 1] = basis.at(date);
        if (static_cast<int>(p.coefficients[static_cast<std::size_t>(date) - 1].size()) !=
            p.bases[static_cast<std::size_t>(date) - 1].size)
            throw ConfigError("policy json: coefficient length mismatch at date " +
                              std::to_string(date));
    }
    const auto lmin = j.at("lambda_min").get<std::vector<double>>();
    const auto lmax = j.at("lambda_max").get<std::vector<double>>();
    for (std::size_t i = 0; i < k && i < lmin.size(); ++i) {
        p.fits[i].lambda_min = lmin[i];
        p.fits[i].lambda_max = lmax[i];
        p.fits[i].truncation_level = p.truncation_levels[i];
    }
    return p;
}

}  // namespace mvstop
