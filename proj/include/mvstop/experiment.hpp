// SPDX-License-Identifier: Apache-2.0
#pragma once

// Configuration and experiment drivers behind the CLI subcommands:
// `table` (benchmark sweeps), `rates` (chaos / Euler step), `pertlab`
// (perturbation inequalities), `oracle` (grid solver dump). Outputs are
// deterministic byte-for-byte for a fixed (config, seed).

#include "mvstop/model.hpp"
#include "mvstop/oracle.hpp"
#include "mvstop/particles.hpp"
#include "mvstop/regression.hpp"
#include "mvstop/stopping.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvstop {

struct RatesConfig {
    std::string kind = "both";  // "chaos" | "euler" | "both"
    std::vector<int> chaos_n = {64, 128, 256, 512, 1024, 2048, 4096};
    int chaos_steps = 1000;
    std::vector<double> euler_deltas = {0.00390625, 0.0078125, 0.015625, 0.03125, 0.0625, 0.125};
    int euler_particles = 256;
    std::string euler_model = "sy_mult";  // state-dependent noise keeps the 1/2 rate
    // Euler-study dynamics: weak reversion and sizable noise so the
    // order-1/2 diffusion error dominates the order-1 drift error on the
    // configured delta range.
    double euler_a = 0.2;
    double euler_sigma = 0.5;
    int p = 2;
    int n_seeds = 20;
};

struct PertLabConfig {
    int instances = 1000;
    int rows = 60;
    int cols = 6;
    double rho = 0.5;
    int conc_dim = 5;
    int conc_n = 2000;
    int conc_trials = 500;
    double conc_radius = 1.0;
    double conc_delta = 0.05;
    double conc_abs_const = 0.1;
};

struct TableConfig {
    bool compute_upper = true;
    bool dump_policies = false;
    bool dump_training_paths = false;
};

struct ExperimentConfig {
    ShimizuYamadaParams params;
    std::string model_kind = "sy";    // "sy" | "sy_mult"
    std::string reward_kind = "call"; // "call" | "put" | "constant"
    double constant_reward = 1.0;
    int num_dates = 10;
    double horizon = 1.0;

    int n_steps = 100;
    std::vector<int> n_tr = {50, 200, 1000};
    int n_test = 5000;
    int n_inner = 100;
    std::vector<std::uint64_t> seeds = {1};

    std::vector<std::string> modes = {"prmc", "rmc"};  // canonical short names
    std::string basis_kind = "poly_reward";            // "poly_reward" | "hermite"
    int basis_param = 2;                               // degree resp. K
    double box_width_sds = 6.0;
    double truncation = -1.0;  // < 0 auto, 0 off, > 0 fixed

    TableConfig table;
    RatesConfig rates;
    PertLabConfig pertlab;
    OracleOptions oracle;

    std::string config_hash;  // FNV-1a of the effective config JSON

    ModelSpec make_model() const;
    RewardSpec make_reward() const;
    BasisFamily make_basis(const RewardSpec& reward) const;
    int basis_size() const;
};

// Merges user JSON over the built-in defaults, validates (ConfigError carries
// the field path), and computes the config hash.
ExperimentConfig parse_config(const std::string& json_text);
std::string default_config_json();

struct TableRow {
    int n_tr = 0;
    std::string mode;
    double lower = 0.0, lower_se = 0.0;
    double upper = 0.0, upper_se = 0.0;
    std::uint64_t seed = 0;
};

// Trains and evaluates every (n_tr, mode, seed) cell; writes table.csv and
// table.md under out_dir and returns the canonical row order.
std::vector<TableRow> run_table(const ExperimentConfig& config, const std::string& out_dir);

struct RatesResult {
    std::vector<RateReport> reports;     // one per kind run
    std::vector<std::string> kinds;
};

RatesResult run_rates(const ExperimentConfig& config, const std::string& out_dir);

struct PertLabResult {
    int instances = 0;
    int condition_held = 0;
    int violations = 0;
    double exceedance_rate = 0.0;
    double epsilon = 0.0;
};

PertLabResult run_pertlab(const ExperimentConfig& config, const std::string& out_dir);

// Solves the benchmark oracle, writes oracle.csv, returns the solution.
OracleSolution run_oracle(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace mvstop
