// SPDX-License-Identifier: Apache-2.0
#pragma once

// Ground truth for the 1-D Shimizu-Yamada benchmark: value and continuation
// functions on a state grid from backward induction with the exact Gaussian
// transition and Gauss-Hermite quadrature.

#include "mvstop/model.hpp"

#include <string>
#include <vector>

namespace mvstop {

// Monotone (Fritsch-Carlson) cubic interpolant; exact at the nodes, no
// overshoot near kinks. Linear extrapolation beyond the grid when allowed.
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }

private:
    std::vector<double> x_, y_, d_;
};

struct OracleOptions {
    int grid_size = 2001;
    int quad_order = 64;
    double width_sds = 6.0;    // grid half-width in stationary standard deviations
    double mass_tol = 1e-8;    // max state-law mass allowed beyond the grid
    bool self_check = true;    // re-solve at doubled resolution, record the gap
};

struct OracleSolution {
    std::vector<double> grid;                         // strictly increasing
    std::vector<std::vector<double>> values;          // per date j = 0..J
    std::vector<std::vector<double>> continuations;   // per date j = 0..J (C_J = 0)
    double v0 = 0.0;                                  // V*_0 at x0
    int quad_order = 0;
    double grid_lo = 0.0, grid_hi = 0.0;
    int num_dates = 0;
    double self_convergence_gap = 0.0;  // |v0 - v0 at doubled resolution|
    bool degenerate = false;            // sigma == 0
};

// Backward induction C_j(x) = E[max(g_{j+1}, C_{j+1})(X_{t_{j+1}}) | X_{t_j} = x]
// for j = J-1..0, V_j = max(g_j, C_j) for j >= 1, V_0 = C_0.
OracleSolution solve_grid(const ShimizuYamadaParams& params, const RewardSpec& rewards,
                          int num_dates, double horizon, const OracleOptions& options = {});

// Interpolated C*_j(x); j == J returns 0. Rejects x beyond the grid.
double continuation_at(const OracleSolution& solution, int date, double x);

// Interpolated V*_j(x).
double value_at(const OracleSolution& solution, int date, double x);

// CSV dump (date, x, value, continuation) for audits and plots.
void write_oracle_csv(const OracleSolution& solution, const std::string& path);

}  // namespace mvstop
