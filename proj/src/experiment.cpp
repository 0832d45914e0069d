// SPDX-License-Identifier: Apache-2.0
#include "mvstop/experiment.hpp"

#include "mvstop/errors.hpp"
#include "mvstop/numerics.hpp"
#include "mvstop/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace mvstop {

namespace {

using nlohmann::json;

constexpr std::uint64_t kTrainTag = 0x747261696eull;
constexpr std::uint64_t kTestTag = 0x74657374ull;
constexpr std::uint64_t kInnerTag = 0x696e6e6572ull;
constexpr std::uint64_t kRateTag = 0x7261746573ull;

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string canonical_mode(const std::string& m) {
    if (m == "prmc" || m == "prmc_ls") return "prmc";
    if (m == "rmc" || m == "rmc_ordinary") return "rmc";
    if (m == "tvr") return "tvr";
    if (m == "prmc_batches" || m == "prmc_independent_batches") return "prmc_batches";
    throw ConfigError("modes: unknown mode '" + m + "'");
}

template <typename T>
T get_field(const json& j, const std::string& path, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(path + "." + key + ": " + e.what());
    }
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + p.string());
    return out;
}

}  // namespace

std::string default_config_json() {
    json j;
    j["model"] = {{"kind", "sy"},    {"a", 1.0},      {"sigma", 0.2}, {"x0", 1.0},
                  {"rate", 0.05},    {"strike", 0.1}, {"horizon", 1.0}};
    j["reward"] = {{"kind", "call"}, {"num_dates", 10}, {"constant_value", 1.0}};
    j["basis"] = {{"kind", "poly_reward"}, {"param", 2}, {"box_width_sds", 6.0}};
    j["simulation"] = {{"n_steps", 100},
                       {"n_tr", json::array({50, 200, 1000})},
                       {"n_test", 5000},
                       {"n_inner", 100},
                       {"seeds", json::array({1})}};
    j["modes"] = json::array({"prmc", "rmc"});
    j["truncation"] = "auto";
    j["table"] = {{"compute_upper", true}, {"dump_policies", false},
                  {"dump_training_paths", false}};
    j["rates"] = {{"kind", "both"},
                  {"chaos_n", json::array({64, 128, 256, 512, 1024, 2048, 4096})},
                  {"chaos_steps", 1000},
                  {"euler_deltas",
                   json::array({0.00390625, 0.0078125, 0.015625, 0.03125, 0.0625, 0.125})},
                  {"euler_particles", 256},
                  {"euler_model", "sy_mult"},
                  {"euler_a", 0.2},
                  {"euler_sigma", 0.5},
                  {"p", 2},
                  {"n_seeds", 20}};
    j["pertlab"] = {{"instances", 1000}, {"rows", 60},        {"cols", 6},
                    {"rho", 0.5},        {"conc_dim", 5},     {"conc_n", 2000},
                    {"conc_trials", 500}, {"conc_radius", 1.0}, {"conc_delta", 0.05},
                    {"conc_abs_const", 0.1}};
    j["oracle"] = {{"grid_size", 2001}, {"quad_order", 64}, {"width_sds", 6.0}};
    return j.dump(2);
}

ExperimentConfig parse_config(const std::string& json_text) {
    json effective = json::parse(default_config_json());
    if (!json_text.empty()) {
        json user;
        try {
            user = json::parse(json_text);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
        effective.merge_patch(user);
    }

    ExperimentConfig cfg;
    const json& jm = effective.at("model");
    cfg.model_kind = get_field<std::string>(jm, "model", "kind");
    if (cfg.model_kind != "sy" && cfg.model_kind != "sy_mult")
        throw ConfigError("model.kind: must be 'sy' or 'sy_mult'");
    cfg.params.a = get_field<double>(jm, "model", "a");
    cfg.params.sigma = get_field<double>(jm, "model", "sigma");
    cfg.params.x0 = get_field<double>(jm, "model", "x0");
    cfg.params.rate = get_field<double>(jm, "model", "rate");
    cfg.params.strike = get_field<double>(jm, "model", "strike");
    cfg.horizon = get_field<double>(jm, "model", "horizon");
    if (!(cfg.params.a > 0.0)) throw ConfigError("model.a: must be > 0");
    if (!(cfg.params.sigma >= 0.0)) throw ConfigError("model.sigma: must be >= 0");
    if (!(cfg.horizon > 0.0)) throw ConfigError("model.horizon: must be > 0");

    const json& jr = effective.at("reward");
    cfg.reward_kind = get_field<std::string>(jr, "reward", "kind");
    if (cfg.reward_kind != "call" && cfg.reward_kind != "put" && cfg.reward_kind != "constant")
        throw ConfigError("reward.kind: must be 'call', 'put' or 'constant'");
    cfg.num_dates = get_field<int>(jr, "reward", "num_dates");
    cfg.constant_reward = get_field<double>(jr, "reward", "constant_value");
    if (cfg.num_dates < 1) throw ConfigError("reward.num_dates: must be >= 1");

    const json& jb = effective.at("basis");
    cfg.basis_kind = get_field<std::string>(jb, "basis", "kind");
    if (cfg.basis_kind != "poly_reward" && cfg.basis_kind != "hermite")
        throw ConfigError("basis.kind: must be 'poly_reward' or 'hermite'");
    cfg.basis_param = get_field<int>(jb, "basis", "param");
    cfg.box_width_sds = get_field<double>(jb, "basis", "box_width_sds");
    if (cfg.basis_kind == "poly_reward" && cfg.basis_param < 0)
        throw ConfigError("basis.param: degree must be >= 0");
    if (cfg.basis_kind == "hermite" && cfg.basis_param < 1)
        throw ConfigError("basis.param: K must be >= 1");

    const json& js = effective.at("simulation");
    cfg.n_steps = get_field<int>(js, "simulation", "n_steps");
    cfg.n_tr = get_field<std::vector<int>>(js, "simulation", "n_tr");
    cfg.n_test = get_field<int>(js, "simulation", "n_test");
    cfg.n_inner = get_field<int>(js, "simulation", "n_inner");
    cfg.seeds = get_field<std::vector<std::uint64_t>>(js, "simulation", "seeds");
    if (cfg.n_tr.empty()) throw ConfigError("simulation.n_tr: must be nonempty");
    if (cfg.seeds.empty()) throw ConfigError("simulation.seeds: must be nonempty");
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        for (std::size_t k = i + 1; k < cfg.seeds.size(); ++k)
            if (cfg.seeds[i] == cfg.seeds[k])
                throw ConfigError("simulation.seeds: seeds must be distinct");
    if (cfg.n_steps < cfg.num_dates || cfg.n_steps % cfg.num_dates != 0)
        throw ConfigError("simulation.n_steps: must be a positive multiple of reward.num_dates");
    if (cfg.n_test < 2) throw ConfigError("simulation.n_test: must be >= 2");
    if (cfg.n_inner < 2) throw ConfigError("simulation.n_inner: must be >= 2");

    const auto modes_raw = get_field<std::vector<std::string>>(effective, "config", "modes");
    if (modes_raw.empty()) throw ConfigError("modes: must be nonempty");
    cfg.modes.clear();
    for (const std::string& m : modes_raw) cfg.modes.push_back(canonical_mode(m));
    for (const std::string& m : cfg.modes)
        if (m == "rmc" && cfg.model_kind != "sy")
            throw ConfigError("modes: 'rmc' needs model.kind == 'sy' (closed form required)");

    const json& jt = effective.at("truncation");
    if (jt.is_string()) {
        if (jt.get<std::string>() != "auto")
            throw ConfigError("truncation: must be 'auto' or a number >= 0");
        cfg.truncation = -1.0;
    } else {
        cfg.truncation = jt.get<double>();
        if (cfg.truncation < 0.0) throw ConfigError("truncation: numeric value must be >= 0");
    }

    const json& jtab = effective.at("table");
    cfg.table.compute_upper = get_field<bool>(jtab, "table", "compute_upper");
    cfg.table.dump_policies = get_field<bool>(jtab, "table", "dump_policies");
    cfg.table.dump_training_paths = get_field<bool>(jtab, "table", "dump_training_paths");

    const json& jrt = effective.at("rates");
    cfg.rates.kind = get_field<std::string>(jrt, "rates", "kind");
    if (cfg.rates.kind != "chaos" && cfg.rates.kind != "euler" && cfg.rates.kind != "both")
        throw ConfigError("rates.kind: must be 'chaos', 'euler' or 'both'");
    cfg.rates.chaos_n = get_field<std::vector<int>>(jrt, "rates", "chaos_n");
    cfg.rates.chaos_steps = get_field<int>(jrt, "rates", "chaos_steps");
    cfg.rates.euler_deltas = get_field<std::vector<double>>(jrt, "rates", "euler_deltas");
    cfg.rates.euler_particles = get_field<int>(jrt, "rates", "euler_particles");
    cfg.rates.euler_model = get_field<std::string>(jrt, "rates", "euler_model");
    cfg.rates.euler_a = get_field<double>(jrt, "rates", "euler_a");
    cfg.rates.euler_sigma = get_field<double>(jrt, "rates", "euler_sigma");
    cfg.rates.p = get_field<int>(jrt, "rates", "p");
    cfg.rates.n_seeds = get_field<int>(jrt, "rates", "n_seeds");
    if (cfg.rates.euler_model != "sy" && cfg.rates.euler_model != "sy_mult")
        throw ConfigError("rates.euler_model: must be 'sy' or 'sy_mult'");
    if (cfg.rates.n_seeds < 1) throw ConfigError("rates.n_seeds: must be >= 1");

    const json& jp = effective.at("pertlab");
    cfg.pertlab.instances = get_field<int>(jp, "pertlab", "instances");
    cfg.pertlab.rows = get_field<int>(jp, "pertlab", "rows");
    cfg.pertlab.cols = get_field<int>(jp, "pertlab", "cols");
    cfg.pertlab.rho = get_field<double>(jp, "pertlab", "rho");
    cfg.pertlab.conc_dim = get_field<int>(jp, "pertlab", "conc_dim");
    cfg.pertlab.conc_n = get_field<int>(jp, "pertlab", "conc_n");
    cfg.pertlab.conc_trials = get_field<int>(jp, "pertlab", "conc_trials");
    cfg.pertlab.conc_radius = get_field<double>(jp, "pertlab", "conc_radius");
    cfg.pertlab.conc_delta = get_field<double>(jp, "pertlab", "conc_delta");
    cfg.pertlab.conc_abs_const = get_field<double>(jp, "pertlab", "conc_abs_const");
    if (cfg.pertlab.instances < 0) throw ConfigError("pertlab.instances: must be >= 0");
    if (cfg.pertlab.conc_trials < 0) throw ConfigError("pertlab.conc_trials: must be >= 0");

    const json& jo = effective.at("oracle");
    cfg.oracle.grid_size = get_field<int>(jo, "oracle", "grid_size");
    cfg.oracle.quad_order = get_field<int>(jo, "oracle", "quad_order");
    cfg.oracle.width_sds = get_field<double>(jo, "oracle", "width_sds");

    // Regressions need at least K samples.
    const int k = cfg.basis_size();
    for (std::size_t i = 0; i < cfg.n_tr.size(); ++i)
        if (cfg.n_tr[i] < k)
            throw ConfigError("simulation.n_tr[" + std::to_string(i) + "] = " +
                              std::to_string(cfg.n_tr[i]) + " < basis size K = " +
                              std::to_string(k) + " (rank-deficient regression)");

    cfg.config_hash = hex64(fnv1a64(effective.dump()));
    return cfg;
}

ModelSpec ExperimentConfig::make_model() const {
    ModelSpec m = (model_kind == "sy") ? sy_model(params) : sy_multiplicative_model(params);
    m.horizon = horizon;
    return m;
}

RewardSpec ExperimentConfig::make_reward() const {
    if (reward_kind == "constant") return make_constant_reward(constant_reward, num_dates);
    const auto [lo, hi] = sy_state_box(params, box_width_sds);
    if (reward_kind == "call") return make_call_reward(params, num_dates, horizon, lo, hi);
    return make_put_reward(params, num_dates, horizon, lo, hi);
}

BasisFamily ExperimentConfig::make_basis(const RewardSpec& reward) const {
    if (basis_kind == "hermite") return hermite_family(basis_param);
    const auto [lo, hi] = sy_state_box(params, box_width_sds);
    return poly_reward_family(basis_param, reward, lo, hi, 1);
}

int ExperimentConfig::basis_size() const {
    return basis_kind == "hermite" ? basis_param : basis_param + 2;
}

namespace {

struct TestCache {
    // Keyed by coupling kind; test paths are shared across n_tr and modes.
    std::map<std::string, ParticlePaths> by_kind;
};

const ParticlePaths& test_paths_for(const ExperimentConfig& cfg, const ModelSpec& model,
                                    const std::string& mode, std::uint64_t test_seed,
                                    TestCache& cache) {
    const std::string kind = (mode == "rmc") ? "exact" : "particle";
    auto it = cache.by_kind.find(kind);
    if (it != cache.by_kind.end()) return it->second;
    ParticlePaths paths =
        (kind == "exact")
            ? simulate_coupled_exact(cfg.params, cfg.n_test, cfg.n_steps, cfg.num_dates,
                                     test_seed, cfg.horizon)
            : simulate_particles(model, cfg.n_test, cfg.n_steps, cfg.num_dates, test_seed);
    return cache.by_kind.emplace(kind, std::move(paths)).first->second;
}

}  // namespace

std::vector<TableRow> run_table(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const ModelSpec model = cfg.make_model();
    const RewardSpec reward = cfg.make_reward();
    const BasisFamily basis = cfg.make_basis(reward);

    TrainOptions train_opts;
    train_opts.truncation = cfg.truncation;

    std::vector<int> n_tr_sorted = cfg.n_tr;
    std::sort(n_tr_sorted.begin(), n_tr_sorted.end());
    std::vector<std::string> modes_sorted = cfg.modes;
    std::sort(modes_sorted.begin(), modes_sorted.end());
    std::vector<std::uint64_t> seeds_sorted = cfg.seeds;
    std::sort(seeds_sorted.begin(), seeds_sorted.end());

    std::vector<TableRow> rows;
    bool dumped_paths = false;
    for (std::uint64_t seed : seeds_sorted) {
        const std::uint64_t test_seed = rng::derive(seed, kTestTag);
        const std::uint64_t inner_seed = rng::derive(seed, kInnerTag);
        TestCache cache;
        for (int n_tr : n_tr_sorted) {
            const std::uint64_t train_seed =
                rng::derive(seed, kTrainTag, static_cast<std::uint64_t>(n_tr));
            for (const std::string& mode : modes_sorted) {
                Policy policy;
                const ParticlePaths* frozen = nullptr;
                ParticlePaths train_paths;
                if (mode == "prmc" || mode == "tvr" || mode == "rmc") {
                    train_paths =
                        (mode == "rmc")
                            ? simulate_coupled_exact(cfg.params, n_tr, cfg.n_steps,
                                                     cfg.num_dates, train_seed, cfg.horizon)
                            : simulate_particles(model, n_tr, cfg.n_steps, cfg.num_dates,
                                                 train_seed);
                    policy = (mode == "tvr") ? tvr_backward(train_paths, reward, basis, train_opts)
                                             : prmc_backward(train_paths, reward, basis, train_opts);
                    frozen = &train_paths;
                    if (cfg.table.dump_training_paths && !dumped_paths) {
                        write_paths_csv(train_paths,
                                        (std::filesystem::path(out_dir) / "train_paths.csv").string(),
                                        (std::filesystem::path(out_dir) / "train_paths.json").string(),
                                        cfg.model_kind);
                        dumped_paths = true;
                    }
                } else {  // prmc_batches
                    policy = prmc_independent_batches(model, reward, basis, n_tr, cfg.n_steps,
                                                      train_seed, train_opts);
                }

                const ParticlePaths& test = test_paths_for(cfg, model, mode, test_seed, cache);
                TableRow row;
                row.n_tr = n_tr;
                row.mode = mode;
                row.seed = seed;
                if (cfg.table.compute_upper) {
                    const BoundsEstimate bounds = evaluate_bounds(policy, model, reward, test,
                                                                  cfg.n_inner, inner_seed, frozen);
                    row.lower = bounds.lower;
                    row.lower_se = bounds.lower_se;
                    row.upper = bounds.upper;
                    row.upper_se = bounds.upper_se;
                } else {
                    const LowerEstimate lower = evaluate_lower(policy, reward, test);
                    row.lower = lower.value;
                    row.lower_se = lower.se;
                }
                rows.push_back(row);

                if (cfg.table.dump_policies) {
                    const std::string name = "policy_" + std::to_string(n_tr) + "_" + mode + "_" +
                                             std::to_string(seed) + ".json";
                    auto out = open_out(std::filesystem::path(out_dir) / name);
                    out << policy_to_json(policy) << "\n";
                }
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const TableRow& a, const TableRow& b) {
        if (a.n_tr != b.n_tr) return a.n_tr < b.n_tr;
        if (a.mode != b.mode) return a.mode < b.mode;
        return a.seed < b.seed;
    });

    auto csv = open_out(std::filesystem::path(out_dir) / "table.csv");
    csv << "n_tr,mode,lower,lower_se,upper,upper_se,seed,config_hash\n";
    for (const TableRow& r : rows) {
        csv << r.n_tr << ',' << r.mode << ',' << fmt(r.lower) << ',' << fmt(r.lower_se) << ','
            << fmt(r.upper) << ',' << fmt(r.upper_se) << ',' << r.seed << ',' << cfg.config_hash
            << "\n";
    }

    // Markdown mirror: one row per n_tr, one column per mode; cells are
    // across-seed medians when several seeds ran.
    auto md = open_out(std::filesystem::path(out_dir) / "table.md");
    md << "| N_tr |";
    for (const std::string& m : modes_sorted) md << ' ' << m << " |";
    md << "\n|---:|";
    for (std::size_t i = 0; i < modes_sorted.size(); ++i) md << "---|";
    md << "\n";
    for (int n_tr : n_tr_sorted) {
        md << "| " << n_tr << " |";
        for (const std::string& m : modes_sorted) {
            std::vector<double> lo, lose, up, upse;
            for (const TableRow& r : rows)
                if (r.n_tr == n_tr && r.mode == m) {
                    lo.push_back(r.lower);
                    lose.push_back(r.lower_se);
                    up.push_back(r.upper);
                    upse.push_back(r.upper_se);
                }
            md << " [" << format_cell(median(lo), median(lose)) << ", "
               << format_cell(median(up), median(upse)) << "] |";
        }
        md << "\n";
    }
    return rows;
}

RatesResult run_rates(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::uint64_t master = cfg.seeds.front();
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cfg.rates.n_seeds));
    for (int i = 0; i < cfg.rates.n_seeds; ++i)
        seeds[static_cast<std::size_t>(i)] =
            rng::derive(master, kRateTag, static_cast<std::uint64_t>(i));

    RatesResult result;
    const bool do_chaos = cfg.rates.kind == "chaos" || cfg.rates.kind == "both";
    const bool do_euler = cfg.rates.kind == "euler" || cfg.rates.kind == "both";

    if (do_chaos) {
        result.kinds.push_back("chaos");
        result.reports.push_back(
            chaos_rate(cfg.params, cfg.rates.chaos_n, cfg.rates.p, cfg.rates.chaos_steps, seeds));
    }
    if (do_euler) {
        ShimizuYamadaParams ep = cfg.params;
        ep.a = cfg.rates.euler_a;
        ep.sigma = cfg.rates.euler_sigma;
        ModelSpec m =
            (cfg.rates.euler_model == "sy") ? sy_model(ep) : sy_multiplicative_model(ep);
        m.horizon = cfg.horizon;
        result.kinds.push_back("euler");
        result.reports.push_back(euler_rate(m, cfg.rates.euler_deltas, cfg.rates.euler_particles,
                                            cfg.rates.p, seeds));
    }

    auto pts = open_out(std::filesystem::path(out_dir) / "rates_points.csv");
    pts << "kind,size,error,seed,config_hash\n";
    for (std::size_t k = 0; k < result.kinds.size(); ++k) {
        const RateReport& r = result.reports[k];
        for (std::size_t i = 0; i < r.sizes.size(); ++i)
            pts << result.kinds[k] << ',' << fmt(r.sizes[i]) << ',' << fmt(r.errors[i]) << ','
                << master << ',' << cfg.config_hash << "\n";
    }
    auto sum = open_out(std::filesystem::path(out_dir) / "rates_summary.csv");
    sum << "kind,slope,r_squared,p,n_seeds,degenerate,seed,config_hash\n";
    for (std::size_t k = 0; k < result.kinds.size(); ++k) {
        const RateReport& r = result.reports[k];
        sum << result.kinds[k] << ',' << fmt(r.slope) << ',' << fmt(r.r_squared) << ',' << r.p
            << ',' << cfg.rates.n_seeds << ',' << (r.degenerate ? 1 : 0) << ',' << master << ','
            << cfg.config_hash << "\n";
    }
    return result;
}

PertLabResult run_pertlab(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::uint64_t master = cfg.seeds.front();
    PertLabResult result;
    result.instances = cfg.pertlab.instances;

    const std::vector<PertLabRow> rows = pinv_perturbation_suite(
        cfg.pertlab.instances, cfg.pertlab.rows, cfg.pertlab.cols, cfg.pertlab.rho,
        rng::derive(master, 0x6f6e41ull));
    auto csv = open_out(std::filesystem::path(out_dir) / "pertlab_pinv.csv");
    csv << "trial,condition_holds,bound,actual,violated\n";
    for (const PertLabRow& r : rows) {
        csv << r.trial << ',' << (r.condition_holds ? 1 : 0) << ',' << fmt(r.bound) << ','
            << fmt(r.actual) << ',' << (r.violated ? 1 : 0) << "\n";
        if (r.condition_holds) ++result.condition_held;
        if (r.violated) ++result.violations;
    }

    auto conc = open_out(std::filesystem::path(out_dir) / "pertlab_concentration.csv");
    conc << "dim,n,radius,delta,abs_const,trials,epsilon,exceedance_rate,config_hash\n";
    if (cfg.pertlab.conc_trials > 0) {
        const double lambda =
            cfg.pertlab.conc_radius * cfg.pertlab.conc_radius / cfg.pertlab.conc_dim;
        result.epsilon =
            concentration_epsilon(cfg.pertlab.conc_dim, cfg.pertlab.conc_n,
                                  cfg.pertlab.conc_radius, cfg.pertlab.conc_delta,
                                  cfg.pertlab.conc_abs_const, lambda, lambda);
        result.exceedance_rate = concentration_experiment(
            cfg.pertlab.conc_dim, cfg.pertlab.conc_n, cfg.pertlab.conc_radius,
            cfg.pertlab.conc_delta, cfg.pertlab.conc_abs_const, cfg.pertlab.conc_trials,
            rng::derive(master, 0x636f6e63ull));
        conc << cfg.pertlab.conc_dim << ',' << cfg.pertlab.conc_n << ','
             << fmt(cfg.pertlab.conc_radius) << ',' << fmt(cfg.pertlab.conc_delta) << ','
             << fmt(cfg.pertlab.conc_abs_const) << ',' << cfg.pertlab.conc_trials << ','
             << fmt(result.epsilon) << ',' << fmt(result.exceedance_rate) << ','
             << cfg.config_hash << "\n";
    }
    return result;
}

OracleSolution run_oracle(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const RewardSpec reward = cfg.make_reward();
    const OracleSolution sol =
        solve_grid(cfg.params, reward, cfg.num_dates, cfg.horizon, cfg.oracle);
    write_oracle_csv(sol, (std::filesystem::path(out_dir) / "oracle.csv").string());
    return sol;
}

}  // namespace mvstop
