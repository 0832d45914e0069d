// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the mvstop CLI: subcommands, flag overrides over a
// config file, and error exits. Spawns the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = MVSTOP_CLI_PATH;

int run(const std::string& args, const std::string& log) {
    const std::string cmd = "'" + kCli + "' " + args + " > " + log + " 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TmpDir {
    std::string path;
    explicit TmpDir(std::string p) : path(std::move(p)) {
        std::filesystem::create_directories(path);
    }
    ~TmpDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("cli: oracle subcommand") {
    TmpDir dir("cli_oracle");
    REQUIRE(run("oracle --grid-size 401 --quad-order 32 --out " + dir.path,
                dir.path + "/log") == 0);
    CHECK(slurp(dir.path + "/log").find("oracle: v0=") != std::string::npos);
    CHECK(std::filesystem::exists(dir.path + "/oracle.csv"));
}

TEST_CASE("cli: table flags override the config file") {
    TmpDir dir("cli_table");
    {
        std::ofstream cfg(dir.path + "/cfg.json");
        cfg << R"({"simulation": {"n_tr": [999], "n_test": 200, "n_inner": 8, "n_steps": 10},
                   "reward": {"num_dates": 2}})";
    }
    REQUIRE(run("table --config " + dir.path + "/cfg.json --seed 9 --n-tr 40 --modes prmc "
                "--no-upper --out " + dir.path,
                dir.path + "/log") == 0);
    const std::string csv = slurp(dir.path + "/table.csv");
    CHECK(csv.find("40,prmc,") != std::string::npos);   // flag wins over file
    CHECK(csv.find("999") == std::string::npos);
    CHECK(csv.find(",9,") != std::string::npos);        // seed column
}

TEST_CASE("cli: rates and pertlab subcommands") {
    TmpDir dir("cli_rp");
    {
        std::ofstream cfg(dir.path + "/cfg.json");
        cfg << R"({"rates": {"euler_deltas": [0.03125, 0.0625, 0.125, 0.25],
                              "euler_particles": 16}})";
    }
    REQUIRE(run("rates --config " + dir.path + "/cfg.json --kind euler --n-seeds 2 --out " +
                    dir.path,
                dir.path + "/log") == 0);
    CHECK(slurp(dir.path + "/rates_summary.csv").find("euler,") != std::string::npos);

    REQUIRE(run("pertlab --instances 5 --trials 0 --out " + dir.path, dir.path + "/log2") == 0);
    CHECK(std::filesystem::exists(dir.path + "/pertlab_pinv.csv"));
    CHECK(slurp(dir.path + "/log2").find("pertlab: 5 instances, 0 violations") !=
          std::string::npos);
}

TEST_CASE("cli: error exits") {
    TmpDir dir("cli_err");
    CHECK(run("table --out " + dir.path, dir.path + "/log") != 0);  // --seed missing
    CHECK(run("table --seed 1 --config /no/such/file.json --out " + dir.path,
              dir.path + "/log2") != 0);
    CHECK(run("table --seed 1 --n-tr 2 --out " + dir.path, dir.path + "/log3") != 0);
    CHECK(slurp(dir.path + "/log3").find("rank") != std::string::npos);
}
