// SPDX-License-Identifier: Apache-2.0
#include "mvstop.h"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

TEST_CASE("c api: version, status names, default config") {
    CHECK(std::strlen(mvstop_version()) > 0);
    CHECK(std::string(mvstop_status_name(MVSTOP_OK)) == "ok");
    CHECK(std::string(mvstop_status_name(MVSTOP_ERR_CONFIG)) == "config_error");
    const std::string cfg = mvstop_default_config();
    CHECK(cfg.find("\"model\"") != std::string::npos);
    mvstop_run* run = nullptr;
    REQUIRE(mvstop_run_create(cfg.c_str(), &run) == MVSTOP_OK);
    mvstop_run_destroy(run);
}

TEST_CASE("c api: invalid config is reported with a message") {
    mvstop_run* run = nullptr;
    const mvstop_status st = mvstop_run_create("{not json", &run);
    CHECK(st == MVSTOP_ERR_CONFIG);
    CHECK(run == nullptr);
    CHECK(std::strlen(mvstop_last_error()) > 0);

    mvstop_run* run2 = nullptr;
    const mvstop_status st2 = mvstop_run_create(R"({"simulation": {"seeds": [1, 1]}})", &run2);
    CHECK(st2 == MVSTOP_ERR_CONFIG);
    CHECK(run2 == nullptr);
}

TEST_CASE("c api: moments, hermite, truncate, constants") {
    double mean = 0.0, var = 0.0;
    REQUIRE(mvstop_sy_moments(1.0, 0.2, 1.0, 0.0, 1.0, 1.0, &mean, &var) == MVSTOP_OK);
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(var == doctest::Approx(0.017293294335267746).epsilon(1e-12));
    CHECK(mvstop_sy_moments(1.0, 0.2, 1.0, 2.0, 1.0, 1.0, &mean, &var) ==
          MVSTOP_ERR_INVALID_ARGUMENT);  // s > t

    double psi = 0.0;
    REQUIRE(mvstop_hermite_eval(0, 0.0, &psi) == MVSTOP_OK);
    CHECK(psi == doctest::Approx(0.7511255444649425).epsilon(1e-12));

    double t = 0.0;
    REQUIRE(mvstop_truncate(2.0, 1.0, &t) == MVSTOP_OK);
    CHECK(t == 1.0);
    CHECK(mvstop_truncate(2.0, -1.0, &t) == MVSTOP_ERR_INVALID_ARGUMENT);

    double c1 = 0.0, c2 = 0.0;
    REQUIRE(mvstop_perturbation_constants(1.0, 1.0, 0.25, 0.25, &c1, &c2) == MVSTOP_OK);
    CHECK(c1 == doctest::Approx(44.0 + 8.0 * std::sqrt(5.0)).epsilon(1e-12));
    CHECK(c2 == doctest::Approx(44.0 + 26.0 * std::sqrt(5.0) / 3.0).epsilon(1e-12));
    CHECK(mvstop_perturbation_constants(1.0, 1.0, 0.9, 0.25, &c1, &c2) ==
          MVSTOP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("c api: a small table run end to end") {
    const char* cfg = R"({
      "reward": {"num_dates": 2},
      "simulation": {"n_steps": 10, "n_tr": [40], "n_test": 200, "n_inner": 8, "seeds": [3]},
      "modes": ["prmc"]
    })";
    mvstop_run* run = nullptr;
    REQUIRE(mvstop_run_create(cfg, &run) == MVSTOP_OK);
    REQUIRE(run != nullptr);
    const std::string dir = "capi_out";
    CHECK(mvstop_run_table(run, dir.c_str()) == MVSTOP_OK);
    CHECK(std::string(mvstop_run_summary(run)).find("table: 1 rows") != std::string::npos);
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / "table.csv"));

    double v0 = 0.0;
    CHECK(mvstop_run_oracle(run, dir.c_str(), &v0) == MVSTOP_OK);
    CHECK(v0 > 0.0);
    mvstop_run_destroy(run);
    std::filesystem::remove_all(dir);
}

TEST_CASE("c api: null handling") {
    CHECK(mvstop_run_create("{}", nullptr) == MVSTOP_ERR_INVALID_ARGUMENT);
    CHECK(mvstop_run_table(nullptr, "x") == MVSTOP_ERR_INVALID_ARGUMENT);
    double v = 0.0;
    CHECK(mvstop_sy_moments(1, 0.2, 1, 0, 1, 1, nullptr, &v) == MVSTOP_ERR_INVALID_ARGUMENT);
    mvstop_run_destroy(nullptr);  // no-op
}
