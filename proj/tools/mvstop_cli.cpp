// SPDX-License-Identifier: Apache-2.0
//
// mvstop command line: benchmark tables, rate studies, the perturbation lab
// and the grid oracle. Drives the shared library through its C API; flags
// override fields of the JSON config. MVSTOP_WORKERS sets the worker count
// and never changes results.

#include "mvstop.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
};

json load_config(const CommonArgs& args) {
    json cfg = json::object();
    if (!args.config_path.empty()) cfg = json::parse(read_file(args.config_path));
    if (args.seed.has_value())
        cfg["simulation"]["seeds"] = json::array({*args.seed});
    return cfg;
}

int run_with(const json& cfg, const std::string& out_dir,
             mvstop_status (*fn)(mvstop_run*, const char*)) {
    mvstop_run* run = nullptr;
    const std::string text = cfg.dump();
    mvstop_status st = mvstop_run_create(text.c_str(), &run);
    if (st != MVSTOP_OK) {
        std::cerr << "error (" << mvstop_status_name(st) << "): " << mvstop_last_error() << "\n";
        return 1;
    }
    st = fn(run, out_dir.c_str());
    if (st != MVSTOP_OK) {
        std::cerr << "error (" << mvstop_status_name(st) << "): " << mvstop_run_last_error(run)
                  << "\n";
        mvstop_run_destroy(run);
        return 1;
    }
    std::cout << mvstop_run_summary(run) << "\n";
    mvstop_run_destroy(run);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal stopping for mean-field (McKean-Vlasov) diffusions via "
                 "particle regression"};
    app.require_subcommand(1);
    std::cout.sync_with_stdio(false);

    CommonArgs table_args, rates_args, pert_args, oracle_args;

    // ---- table ----
    auto* table = app.add_subcommand("table", "Train policies and emit lower/dual-upper bounds");
    std::uint64_t table_seed = 0;
    std::vector<int> n_tr;
    std::vector<std::string> modes;
    int n_test = -1, n_inner = -1, dates = -1, n_steps = -1;
    bool dump_policies = false, no_upper = false;
    table->add_option("--config", table_args.config_path, "JSON config file");
    table->add_option("--out", table_args.out_dir, "output directory")->capture_default_str();
    table->add_option("--seed", table_seed, "master seed (required)")->required();
    table->add_option("--n-tr", n_tr, "training sizes");
    table->add_option("--modes", modes, "modes: prmc, rmc, tvr, prmc_batches");
    table->add_option("--n-test", n_test, "test paths");
    table->add_option("--n-inner", n_inner, "inner paths for the dual");
    table->add_option("--dates", dates, "number of exercise dates");
    table->add_option("--n-steps", n_steps, "Euler grid steps");
    table->add_flag("--dump-policies", dump_policies, "write per-cell policy JSON");
    table->add_flag("--no-upper", no_upper, "skip the dual upper bound");

    // ---- rates ----
    auto* rates = app.add_subcommand("rates", "Chaos and Euler-step rate studies");
    std::string rates_kind;
    int rates_seeds = -1;
    rates->add_option("--config", rates_args.config_path, "JSON config file");
    rates->add_option("--out", rates_args.out_dir, "output directory")->capture_default_str();
    rates->add_option("--seed", rates_args.seed, "master seed");
    rates->add_option("--kind", rates_kind, "chaos | euler | both");
    rates->add_option("--n-seeds", rates_seeds, "macro replications");

    // ---- pertlab ----
    auto* pert = app.add_subcommand("pertlab", "Pseudoinverse perturbation and concentration lab");
    int pert_instances = -1, pert_trials = -1;
    pert->add_option("--config", pert_args.config_path, "JSON config file");
    pert->add_option("--out", pert_args.out_dir, "output directory")->capture_default_str();
    pert->add_option("--seed", pert_args.seed, "master seed");
    pert->add_option("--instances", pert_instances, "perturbation instances");
    pert->add_option("--trials", pert_trials, "concentration trials");

    // ---- oracle ----
    auto* oracle = app.add_subcommand("oracle", "Grid oracle for the benchmark");
    int oracle_dates = -1, grid_size = -1, quad_order = -1;
    oracle->add_option("--config", oracle_args.config_path, "JSON config file");
    oracle->add_option("--out", oracle_args.out_dir, "output directory")->capture_default_str();
    oracle->add_option("--dates", oracle_dates, "number of exercise dates");
    oracle->add_option("--grid-size", grid_size, "grid nodes");
    oracle->add_option("--quad-order", quad_order, "Gauss-Hermite order");

    CLI11_PARSE(app, argc, argv);

    try {
        if (table->parsed()) {
            table_args.seed = table_seed;
            json cfg = load_config(table_args);
            if (!n_tr.empty()) cfg["simulation"]["n_tr"] = n_tr;
            if (!modes.empty()) cfg["modes"] = modes;
            if (n_test > 0) cfg["simulation"]["n_test"] = n_test;
            if (n_inner > 0) cfg["simulation"]["n_inner"] = n_inner;
            if (dates > 0) cfg["reward"]["num_dates"] = dates;
            if (n_steps > 0) cfg["simulation"]["n_steps"] = n_steps;
            if (dump_policies) cfg["table"]["dump_policies"] = true;
            if (no_upper) cfg["table"]["compute_upper"] = false;
            return run_with(cfg, table_args.out_dir, &mvstop_run_table);
        }
        if (rates->parsed()) {
            json cfg = load_config(rates_args);
            if (!rates_kind.empty()) cfg["rates"]["kind"] = rates_kind;
            if (rates_seeds > 0) cfg["rates"]["n_seeds"] = rates_seeds;
            return run_with(cfg, rates_args.out_dir, &mvstop_run_rates);
        }
        if (pert->parsed()) {
            json cfg = load_config(pert_args);
            if (pert_instances >= 0) cfg["pertlab"]["instances"] = pert_instances;
            if (pert_trials >= 0) cfg["pertlab"]["conc_trials"] = pert_trials;
            return run_with(cfg, pert_args.out_dir, &mvstop_run_pertlab);
        }
        if (oracle->parsed()) {
            json cfg = load_config(oracle_args);
            if (oracle_dates > 0) cfg["reward"]["num_dates"] = oracle_dates;
            if (grid_size > 0) cfg["oracle"]["grid_size"] = grid_size;
            if (quad_order > 0) cfg["oracle"]["quad_order"] = quad_order;
            mvstop_run* run = nullptr;
            const std::string text = cfg.dump();
            mvstop_status st = mvstop_run_create(text.c_str(), &run);
            if (st != MVSTOP_OK) {
                std::cerr << "error (" << mvstop_status_name(st) << "): " << mvstop_last_error()
                          << "\n";
                return 1;
            }
            double v0 = 0.0;
            st = mvstop_run_oracle(run, oracle_args.out_dir.c_str(), &v0);
            if (st != MVSTOP_OK) {
                std::cerr << "error (" << mvstop_status_name(st)
                          << "): " << mvstop_run_last_error(run) << "\n";
                mvstop_run_destroy(run);
                return 1;
            }
            std::cout << mvstop_run_summary(run) << "\n";
            mvstop_run_destroy(run);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
