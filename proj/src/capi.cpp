// SPDX-License-Identifier: Apache-2.0
#include "mvstop.h"

#include "mvstop/basis.hpp"
#include "mvstop/errors.hpp"
#include "mvstop/experiment.hpp"
#include "mvstop/model.hpp"
#include "mvstop/regression.hpp"

#include <cstdio>
#include <exception>
#include <string>

namespace {

thread_local std::string g_last_error;

struct ErrorSink {
    std::string message;
};

mvstop_status classify(const std::exception& e) {
    if (dynamic_cast<const mvstop::ConfigError*>(&e) != nullptr) return MVSTOP_ERR_CONFIG;
    if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr)
        return MVSTOP_ERR_INVALID_ARGUMENT;
    if (dynamic_cast<const mvstop::SingularFitError*>(&e) != nullptr) return MVSTOP_ERR_NUMERIC;
    if (dynamic_cast<const mvstop::NonFiniteStateError*>(&e) != nullptr)
        return MVSTOP_ERR_NUMERIC;
    if (dynamic_cast<const mvstop::GridTooNarrowError*>(&e) != nullptr)
        return MVSTOP_ERR_NUMERIC;
    return MVSTOP_ERR_INTERNAL;
}

template <typename Fn>
mvstop_status guarded(ErrorSink* sink, Fn&& fn) {
    try {
        fn();
        return MVSTOP_OK;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        if (sink != nullptr) sink->message = e.what();
        const mvstop_status st = classify(e);
        // I/O failures surface as plain runtime_errors mentioning files.
        if (st == MVSTOP_ERR_INTERNAL && g_last_error.find("cannot open") != std::string::npos)
            return MVSTOP_ERR_IO;
        return st;
    } catch (...) {
        g_last_error = "unknown error";
        if (sink != nullptr) sink->message = g_last_error;
        return MVSTOP_ERR_INTERNAL;
    }
}

}  // namespace

struct mvstop_run {
    mvstop::ExperimentConfig config;
    ErrorSink errors;
    std::string summary;
};

extern "C" {

const char* mvstop_version(void) { return "0.1.0"; }

const char* mvstop_status_name(mvstop_status status) {
    switch (status) {
        case MVSTOP_OK: return "ok";
        case MVSTOP_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case MVSTOP_ERR_CONFIG: return "config_error";
        case MVSTOP_ERR_NUMERIC: return "numeric_error";
        case MVSTOP_ERR_IO: return "io_error";
        case MVSTOP_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* mvstop_last_error(void) { return g_last_error.c_str(); }

const char* mvstop_default_config(void) {
    static const std::string text = mvstop::default_config_json();
    return text.c_str();
}

mvstop_status mvstop_run_create(const char* config_json, mvstop_run** out_run) {
    if (out_run == nullptr) {
        g_last_error = "mvstop_run_create: out_run is NULL";
        return MVSTOP_ERR_INVALID_ARGUMENT;
    }
    *out_run = nullptr;
    auto* run = new mvstop_run();
    const mvstop_status st = guarded(&run->errors, [&] {
        run->config =
            mvstop::parse_config(config_json != nullptr ? std::string(config_json) : "");
    });
    if (st != MVSTOP_OK) {
        delete run;
        return st;
    }
    *out_run = run;
    return MVSTOP_OK;
}

void mvstop_run_destroy(mvstop_run* run) { delete run; }

const char* mvstop_run_last_error(const mvstop_run* run) {
    return run != nullptr ? run->errors.message.c_str() : "";
}

const char* mvstop_run_summary(const mvstop_run* run) {
    return run != nullptr ? run->summary.c_str() : "";
}

mvstop_status mvstop_run_table(mvstop_run* run, const char* out_dir) {
    if (run == nullptr || out_dir == nullptr) {
        g_last_error = "mvstop_run_table: NULL argument";
        return MVSTOP_ERR_INVALID_ARGUMENT;
    }
    return guarded(&run->errors, [&] {
        const auto rows = mvstop::run_table(run->config, out_dir);
        run->summary = "table: " + std::to_string(rows.size()) + " rows -> " +
                       std::string(out_dir) + "/table.csv";
    });
}

mvstop_status mvstop_run_rates(mvstop_run* run, const char* out_dir) {
    if (run == nullptr || out_dir == nullptr) {
        g_last_error = "mvstop_run_rates: NULL argument";
        return MVSTOP_ERR_INVALID_ARGUMENT;
    }
    return guarded(&run->errors, [&] {
        const auto result = mvstop::run_rates(run->config, out_dir);
        std::string s = "rates:";
        for (std::size_t i = 0; i < result.kinds.size(); ++i) {
            char buf[96];
            std::snprintf(buf, sizeof buf, " %s slope=%.4f r2=%.4f", result.kinds[i].c_str(),
                          result.reports[i].slope, result.reports[i].r_squared);
            s += buf;
        }
        run->summary = s + " -> " + std::string(out_dir) + "/rates_summary.csv";
    });
}

mvstop_status mvstop_run_pertlab(mvstop_run* run, const char* out_dir) {
    if (run == nullptr || out_dir == nullptr) {
        g_last_error = "mvstop_run_pertlab: NULL argument";
        return MVSTOP_ERR_INVALID_ARGUMENT;
    }
    return guarded(&run->errors, [&] {
        const auto result = mvstop::run_pertlab(run->config, out_dir);
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "pertlab: %d instances, %d violations, exceedance=%.4f",
                      result.instances, result.violations, result.exceedance_rate);
        run->summary = std::string(buf) + " -> " + std::string(out_dir);
    });
}

mvstop_status mvstop_run_oracle(mvstop_run* run, const char* out_dir, double* out_v0) {
    if (run == nullptr || out_dir == nullptr) {
        g_last_error = "mvstop_run_oracle: NULL argument";
        return MVSTOP_ERR_INVALID_ARGUMENT;
    }
    return guarded(&run->errors, [&] {
        const auto sol = mvstop::run_oracle(run->config, out_dir);
        if (out_v0 != nullptr) *out_v0 = sol.v0;
        char buf[120];
        std::snprintf(buf, sizeof buf, "oracle: v0=%.6f (self-convergence gap %.2e)", sol.v0,
                      sol.self_convergence_gap);
        run->summary = std::string(buf) + " -> " + std::string(out_dir) + "/oracle.csv";
    });
}

mvstop_status mvstop_sy_moments(double a, double sigma, double x0, double s, double t,
                                double xs, double* out_mean, double* out_var) {
    if (out_mean == nullptr || out_var == nullptr) {
        g_last_error = "mvstop_sy_moments: NULL output";
        return MVSTOP_ERR_INVALID_ARGUMENT;
    }
    return guarded(nullptr, [&] {
        mvstop::ShimizuYamadaParams p;
        p.a = a;
        p.sigma = sigma;
        p.x0 = x0;
        const auto cm = mvstop::sy_conditional_moments(p, s, t, xs);
        *out_mean = cm.mean;
        *out_var = cm.var;
    });
}

mvstop_status mvstop_hermite_eval(int order, double x, double* out_value) {
    if (out_value == nullptr) {
        g_last_error = "mvstop_hermite_eval: NULL output";
        return MVSTOP_ERR_INVALID_ARGUMENT;
    }
    return guarded(nullptr, [&] { *out_value = mvstop::hermite_function(order, x); });
}

mvstop_status mvstop_truncate(double value, double level, double* out_value) {
    if (out_value == nullptr) {
        g_last_error = "mvstop_truncate: NULL output";
        return MVSTOP_ERR_INVALID_ARGUMENT;
    }
    return guarded(nullptr, [&] { *out_value = mvstop::truncate(value, level); });
}

mvstop_status mvstop_perturbation_constants(double lambda_min, double lambda_max,
                                            double epsilon, double rho, double* out_c1,
                                            double* out_c2) {
    if (out_c1 == nullptr || out_c2 == nullptr) {
        g_last_error = "mvstop_perturbation_constants: NULL output";
        return MVSTOP_ERR_INVALID_ARGUMENT;
    }
    return guarded(nullptr, [&] {
        const auto [c1, c2] =
            mvstop::perturbation_constants(lambda_min, lambda_max, epsilon, rho);
        *out_c1 = c1;
        *out_c2 = c2;
    });
}

}  // extern "C"
