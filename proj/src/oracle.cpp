// SPDX-License-Identifier: Apache-2.0
#include "mvstop/oracle.hpp"

#include "mvstop/errors.hpp"
#include "mvstop/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mvstop {

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("Pchip: need >= 2 matching nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("Pchip: nodes must increase");

    d_.assign(n, 0.0);
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        s[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
        d_[0] = d_[1] = s[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    // One-sided endpoint slopes with the standard shape-preserving clamps.
    auto endpoint = [](double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (s0 * s1 <= 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return d;
    };
    d_[0] = endpoint(h[0], h[1], s[0], s[1]);
    d_[n - 1] = endpoint(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
}

double Pchip::operator()(double x) const {
    const std::size_t n = x_.size();
    if (x <= x_.front()) return y_.front() + d_.front() * (x - x_.front());
    if (x >= x_.back()) return y_.back() + d_.back() * (x - x_.back());
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1);
    if (i >= n - 1) i = n - 2;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] +
           (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * d_[i + 1];
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

OracleSolution solve_grid_once(const ShimizuYamadaParams& params, const RewardSpec& rewards,
                               int num_dates, double horizon, const OracleOptions& options) {
    OracleSolution sol;
    sol.num_dates = num_dates;
    sol.quad_order = options.quad_order;

    const double dt = horizon / num_dates;
    const double s_stat = params.sigma / std::sqrt(2.0 * params.a);

    if (params.sigma == 0.0) {
        // Deterministic process stuck at x0.
        sol.degenerate = true;
        sol.grid = {params.x0};
        sol.grid_lo = sol.grid_hi = params.x0;
        sol.values.assign(static_cast<std::size_t>(num_dates) + 1, {0.0});
        sol.continuations.assign(static_cast<std::size_t>(num_dates) + 1, {0.0});
        const std::vector<double> x{params.x0};
        sol.values[static_cast<std::size_t>(num_dates)][0] = rewards.payoff(num_dates, x);
        for (int j = num_dates - 1; j >= 0; --j) {
            const double cont = sol.values[static_cast<std::size_t>(j) + 1][0];
            sol.continuations[static_cast<std::size_t>(j)][0] = cont;
            sol.values[static_cast<std::size_t>(j)][0] =
                (j >= 1) ? std::max(rewards.payoff(j, x), cont) : cont;
        }
        sol.v0 = sol.values[0][0];
        return sol;
    }

    sol.grid_lo = params.x0 - options.width_sds * s_stat;
    sol.grid_hi = params.x0 + options.width_sds * s_stat;

    // State-law mass beyond the grid must be negligible at every date.
    for (int j = 1; j <= num_dates; ++j) {
        const ConditionalMoments cm =
            sy_conditional_moments(params, 0.0, j * dt, params.x0);
        const double sd = std::sqrt(cm.var);
        const double mass = normal_cdf((sol.grid_lo - cm.mean) / sd) +
                            normal_cdf((cm.mean - sol.grid_hi) / sd);
        if (mass > options.mass_tol)
            throw GridTooNarrowError("solve_grid: state-law mass beyond grid at date " +
                                     std::to_string(j) + " is " + std::to_string(mass));
    }

    const int gn = options.grid_size;
    sol.grid.resize(static_cast<std::size_t>(gn));
    for (int i = 0; i < gn; ++i)
        sol.grid[static_cast<std::size_t>(i)] =
            sol.grid_lo + (sol.grid_hi - sol.grid_lo) * i / (gn - 1);

    const GaussHermiteRule rule = gauss_hermite(options.quad_order);
    const double em = -std::expm1(-params.a * dt);  // 1 - e^{-a dt}
    const double sd = std::sqrt(params.sigma * params.sigma *
                                (-std::expm1(-2.0 * params.a * dt)) / (2.0 * params.a));

    sol.values.assign(static_cast<std::size_t>(num_dates) + 1,
                      std::vector<double>(static_cast<std::size_t>(gn), 0.0));
    sol.continuations.assign(static_cast<std::size_t>(num_dates) + 1,
                             std::vector<double>(static_cast<std::size_t>(gn), 0.0));

    std::vector<double> pt(1);
    for (int i = 0; i < gn; ++i) {
        pt[0] = sol.grid[static_cast<std::size_t>(i)];
        sol.values[static_cast<std::size_t>(num_dates)][static_cast<std::size_t>(i)] =
            rewards.payoff(num_dates, pt);
    }

    for (int j = num_dates - 1; j >= 0; --j) {
        const Pchip next(sol.grid, sol.values[static_cast<std::size_t>(j) + 1]);
        // Off-grid quadrature points: the value never drops below the payoff,
        // so floor the linear extrapolation at g_{j+1} (exact for date J,
        // where the tail kink would otherwise leak into edge nodes).
        std::vector<double> qpt(1);
        auto v_next = [&](double y) {
            const double v = next(y);
            if (y < sol.grid_lo || y > sol.grid_hi) {
                qpt[0] = y;
                return std::max(v, rewards.payoff(j + 1, qpt));
            }
            return v;
        };
        auto& cont = sol.continuations[static_cast<std::size_t>(j)];
        auto& val = sol.values[static_cast<std::size_t>(j)];
        for (int i = 0; i < gn; ++i) {
            const double x = sol.grid[static_cast<std::size_t>(i)];
            const double mean = x + (params.x0 - x) * em;
            cont[static_cast<std::size_t>(i)] = rule.gaussian_expectation(mean, sd, v_next);
            if (j >= 1) {
                pt[0] = x;
                val[static_cast<std::size_t>(i)] =
                    std::max(rewards.payoff(j, pt), cont[static_cast<std::size_t>(i)]);
            } else {
                val[static_cast<std::size_t>(i)] = cont[static_cast<std::size_t>(i)];
            }
        }
    }

    // x0 is the center node for odd grid sizes; interpolate otherwise.
    const Pchip v0_interp(sol.grid, sol.values[0]);
    sol.v0 = v0_interp(params.x0);
    return sol;
}

}  // namespace

OracleSolution solve_grid(const ShimizuYamadaParams& params, const RewardSpec& rewards,
                          int num_dates, double horizon, const OracleOptions& options) {
    if (num_dates < 1) throw std::invalid_argument("solve_grid: num_dates must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("solve_grid: horizon must be > 0");
    if (options.grid_size < 5) throw std::invalid_argument("solve_grid: grid_size too small");
    if (options.quad_order < 20) throw std::invalid_argument("solve_grid: quad_order must be >= 20");
    if (rewards.num_dates != num_dates)
        throw std::invalid_argument("solve_grid: reward num_dates mismatch");

    OracleSolution sol = solve_grid_once(params, rewards, num_dates, horizon, options);
    if (options.self_check && !sol.degenerate) {
        OracleOptions fine = options;
        fine.grid_size = 2 * options.grid_size - 1;
        fine.quad_order = 2 * options.quad_order;
        fine.self_check = false;
        const OracleSolution ref = solve_grid_once(params, rewards, num_dates, horizon, fine);
        sol.self_convergence_gap = std::abs(sol.v0 - ref.v0);
    }
    return sol;
}

double continuation_at(const OracleSolution& solution, int date, double x) {
    if (date < 0 || date > solution.num_dates)
        throw std::invalid_argument("continuation_at: date out of range");
    if (date == solution.num_dates) return 0.0;
    if (solution.degenerate) {
        if (x != solution.grid[0])
            throw std::invalid_argument("continuation_at: degenerate oracle defined at x0 only");
        return solution.continuations[static_cast<std::size_t>(date)][0];
    }
    if (x < solution.grid_lo || x > solution.grid_hi)
        throw std::invalid_argument("continuation_at: x beyond grid bounds");
    const Pchip interp(solution.grid, solution.continuations[static_cast<std::size_t>(date)]);
    return interp(x);
}

double value_at(const OracleSolution& solution, int date, double x) {
    if (date < 0 || date > solution.num_dates)
        throw std::invalid_argument("value_at: date out of range");
    if (solution.degenerate) {
        if (x != solution.grid[0])
            throw std::invalid_argument("value_at: degenerate oracle defined at x0 only");
        return solution.values[static_cast<std::size_t>(date)][0];
    }
    if (x < solution.grid_lo || x > solution.grid_hi)
        throw std::invalid_argument("value_at: x beyond grid bounds");
    const Pchip interp(solution.grid, solution.values[static_cast<std::size_t>(date)]);
    return interp(x);
}

void write_oracle_csv(const OracleSolution& solution, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_oracle_csv: cannot open " + path);
    out << "date,x,value,continuation\n";
    char buf[96];
    for (int j = 0; j <= solution.num_dates; ++j) {
        for (std::size_t i = 0; i < solution.grid.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", j, solution.grid[i],
                          solution.values[static_cast<std::size_t>(j)][i],
                          solution.continuations[static_cast<std::size_t>(j)][i]);
            out << buf;
        }
    }
}

}  // namespace mvstop
