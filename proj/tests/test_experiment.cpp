// SPDX-License-Identifier: Apache-2.0
#include "mvstop/errors.hpp"
#include "mvstop/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mvstop;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small but real table setup: two sizes, two modes, one seed.
std::string small_table_config() {
    return R"({
      "reward": {"num_dates": 4},
      "simulation": {"n_steps": 20, "n_tr": [50, 120], "n_test": 400, "n_inner": 16,
                     "seeds": [5]},
      "modes": ["prmc", "rmc"]
    })";
}

}  // namespace

TEST_CASE("config: defaults parse and the hash is stable") {
    const ExperimentConfig a = parse_config("");
    const ExperimentConfig b = parse_config("");
    CHECK(a.config_hash == b.config_hash);
    CHECK(a.num_dates == 10);
    CHECK(a.basis_size() == 4);
    const ExperimentConfig c = parse_config(R"({"model": {"sigma": 0.3}})");
    CHECK(c.config_hash != a.config_hash);
    CHECK(c.params.sigma == 0.3);
}

TEST_CASE("config: validation failures carry field paths") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"modes": ["bogus"]})"),
                         doctest::Contains("modes"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"simulation": {"n_tr": []}})"),
                         doctest::Contains("n_tr"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"simulation": {"seeds": [1, 1]}})"),
                         doctest::Contains("seeds"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"simulation": {"n_steps": 7}})"),
                         doctest::Contains("n_steps"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"kind": "sy_mult"}})"),
                         doctest::Contains("rmc"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"simulation": {"n_tr": [2]}})"),
                         doctest::Contains("rank"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"truncation": "bogus"})"),
                         doctest::Contains("truncation"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("{nonsense"), doctest::Contains("JSON"), ConfigError);
}

TEST_CASE("table: canonical rows, schema, reruns byte-identical") {
    const ExperimentConfig cfg = parse_config(small_table_config());
    const std::string dir_a = "exp_out_a", dir_b = "exp_out_b";
    const auto rows = run_table(cfg, dir_a);
    run_table(cfg, dir_b);

    REQUIRE(rows.size() == 4);
    CHECK(rows[0].n_tr == 50);
    CHECK(rows[0].mode == "prmc");
    CHECK(rows[1].mode == "rmc");
    CHECK(rows[2].n_tr == 120);
    for (const auto& r : rows) {
        CHECK(r.lower > 0.0);
        CHECK(r.lower_se > 0.0);
        CHECK(r.upper >= r.lower - 3.0 * (r.lower_se + r.upper_se));
    }

    const std::string csv = slurp(std::filesystem::path(dir_a) / "table.csv");
    CHECK(csv.rfind("n_tr,mode,lower,lower_se,upper,upper_se,seed,config_hash\n", 0) == 0);
    CHECK(csv.find("50,prmc,") != std::string::npos);
    CHECK(csv.find(cfg.config_hash) != std::string::npos);

    CHECK(csv == slurp(std::filesystem::path(dir_b) / "table.csv"));
    CHECK(slurp(std::filesystem::path(dir_a) / "table.md") ==
          slurp(std::filesystem::path(dir_b) / "table.md"));

    const std::string md = slurp(std::filesystem::path(dir_a) / "table.md");
    CHECK(md.find("| N_tr |") != std::string::npos);
    CHECK(md.find("(0.") != std::string::npos);  // cell format value(se)
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("table: several seeds aggregate into median markdown cells") {
    const ExperimentConfig cfg = parse_config(R"({
      "reward": {"num_dates": 3},
      "simulation": {"n_steps": 12, "n_tr": [60], "n_test": 300, "n_inner": 8,
                     "seeds": [4, 9, 2]},
      "modes": ["prmc"]
    })");
    const std::string dir = "exp_out_seeds";
    const auto rows = run_table(cfg, dir);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].seed == 2);  // canonical order sorts seeds
    CHECK(rows[1].seed == 4);
    CHECK(rows[2].seed == 9);
    const std::string md = slurp(std::filesystem::path(dir) / "table.md");
    CHECK(md.find("| 60 |") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("table: policy dumps on request") {
    ExperimentConfig cfg = parse_config(small_table_config());
    cfg.table.dump_policies = true;
    cfg.table.compute_upper = false;
    const std::string dir = "exp_out_pol";
    run_table(cfg, dir);
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / "policy_50_prmc_5.json"));
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / "policy_120_rmc_5.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("rates: deterministic bytes and sane summaries") {
    const std::string cfg_text = R"({
      "rates": {"kind": "both", "chaos_n": [8, 16, 32, 80], "chaos_steps": 50,
                 "euler_deltas": [0.03125, 0.0625, 0.125, 0.25], "euler_particles": 32,
                 "n_seeds": 3}
    })";
    const ExperimentConfig cfg = parse_config(cfg_text);
    const std::string dir_a = "rates_a", dir_b = "rates_b";
    const RatesResult res = run_rates(cfg, dir_a);
    run_rates(cfg, dir_b);
    REQUIRE(res.kinds.size() == 2);
    CHECK(res.reports[0].slope < 0.0);  // chaos
    CHECK(res.reports[1].slope > 0.0);  // euler
    CHECK(slurp(std::filesystem::path(dir_a) / "rates_points.csv") ==
          slurp(std::filesystem::path(dir_b) / "rates_points.csv"));
    CHECK(slurp(std::filesystem::path(dir_a) / "rates_summary.csv") ==
          slurp(std::filesystem::path(dir_b) / "rates_summary.csv"));
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("pertlab: empty runs succeed with header-only reports") {
    const ExperimentConfig cfg =
        parse_config(R"({"pertlab": {"instances": 0, "conc_trials": 0}})");
    const std::string dir = "pert_empty";
    const PertLabResult res = run_pertlab(cfg, dir);
    CHECK(res.instances == 0);
    CHECK(res.violations == 0);
    const std::string csv = slurp(std::filesystem::path(dir) / "pertlab_pinv.csv");
    CHECK(csv == "trial,condition_holds,bound,actual,violated\n");
    std::filesystem::remove_all(dir);
}

TEST_CASE("pertlab: small run has no violations and bounded exceedance") {
    const ExperimentConfig cfg = parse_config(
        R"({"pertlab": {"instances": 40, "rows": 30, "cols": 4, "conc_trials": 40,
                         "conc_n": 500, "conc_dim": 3}})");
    const std::string dir = "pert_small";
    const PertLabResult res = run_pertlab(cfg, dir);
    CHECK(res.violations == 0);
    CHECK(res.condition_held == 40);
    CHECK(res.exceedance_rate <= 0.05);
    const std::string csv = slurp(std::filesystem::path(dir) / "pertlab_pinv.csv");
    CHECK(csv.find("\n0,1,") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("table: hermite basis and multiplicative model variants run") {
    const ExperimentConfig cfg = parse_config(R"({
      "model": {"kind": "sy_mult"},
      "basis": {"kind": "hermite", "param": 4},
      "reward": {"num_dates": 3},
      "simulation": {"n_steps": 12, "n_tr": [80], "n_test": 300, "n_inner": 8, "seeds": [6]},
      "modes": ["prmc", "tvr"]
    })");
    CHECK(cfg.basis_size() == 4);
    const std::string dir = "exp_out_variants";
    const auto rows = run_table(cfg, dir);  // dual runs the frozen-flow sampler
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.lower > 0.0);
        CHECK(r.upper + 3.0 * (r.upper_se + r.lower_se) >= r.lower - 3.0 * r.lower_se);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("oracle runner writes the grid dump") {
    const ExperimentConfig cfg =
        parse_config(R"({"oracle": {"grid_size": 401, "quad_order": 32}})");
    const std::string dir = "oracle_out";
    const OracleSolution sol = run_oracle(cfg, dir);
    CHECK(sol.v0 > 0.8);
    CHECK(sol.v0 < 1.2);
    const std::string csv = slurp(std::filesystem::path(dir) / "oracle.csv");
    CHECK(csv.rfind("date,x,value,continuation\n", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("default config text parses to the same configuration") {
    const ExperimentConfig from_text = parse_config(default_config_json());
    const ExperimentConfig from_empty = parse_config("");
    CHECK(from_text.config_hash == from_empty.config_hash);
}
