// SPDX-License-Identifier: Apache-2.0
#include "mvstop/particles.hpp"

#include "mvstop/errors.hpp"
#include "mvstop/numerics.hpp"
#include "mvstop/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mvstop {

namespace {

constexpr std::uint64_t kParticlePurpose = 0x70617274ull;  // increment streams

void validate_grid(int n_particles, int n_steps, int n_dates) {
    if (n_particles < 1) throw std::invalid_argument("simulate: n_particles must be >= 1");
    if (n_dates < 1) throw std::invalid_argument("simulate: n_dates must be >= 1");
    if (n_steps < n_dates) throw std::invalid_argument("simulate: n_steps must be >= n_dates");
    if (n_steps % n_dates != 0)
        throw std::invalid_argument("simulate: n_steps must be divisible by n_dates");
}

ParticlePaths make_paths(int n_particles, int n_steps, int dim, int n_dates, double horizon,
                         std::uint64_t seed, CouplingTag tag) {
    ParticlePaths p;
    p.n_particles = n_particles;
    p.n_steps = n_steps;
    p.dim = dim;
    p.num_dates = n_dates;
    p.seed = seed;
    p.coupling_tag = tag;
    p.times.resize(static_cast<std::size_t>(n_steps) + 1);
    for (int k = 0; k <= n_steps; ++k)
        p.times[static_cast<std::size_t>(k)] = horizon * k / n_steps;
    p.states.assign(static_cast<std::size_t>(n_particles) * (n_steps + 1) * dim, 0.0);
    p.step_means.assign(static_cast<std::size_t>(n_steps + 1) * dim, 0.0);
    return p;
}

std::uint64_t stream_of(const SimOptions& opts, int i) {
    return opts.stream_ids.empty() ? static_cast<std::uint64_t>(i)
                                   : opts.stream_ids[static_cast<std::size_t>(i)];
}

// Cross-particle mean at step k, computed as deviations from particle 0 so
// that identical states give the exact common value.
void step_mean(const std::vector<double>& states, int n, int n_steps, int dim, int k,
               std::vector<double>& scratch, double* out) {
    for (int l = 0; l < dim; ++l) {
        const double ref = states[(static_cast<std::size_t>(0) * (n_steps + 1) + k) * dim + l];
        scratch.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            scratch[static_cast<std::size_t>(i)] =
                states[(static_cast<std::size_t>(i) * (n_steps + 1) + k) * dim + l] - ref;
        }
        out[l] = ref + pairwise_sum(scratch) / n;
    }
}

}  // namespace

const char* to_string(CouplingTag tag) {
    switch (tag) {
        case CouplingTag::particle_system: return "particle_system";
        case CouplingTag::exact_limit: return "exact_limit";
        case CouplingTag::euler_limit: return "euler_limit";
    }
    return "unknown";
}

double particle_increment_normal(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) {
    return rng::NormalField(seed, kParticlePurpose).normal(stream, counter);
}

ParticlePaths simulate_particles(const ModelSpec& model, int n_particles, int n_steps,
                                 int n_dates, std::uint64_t seed, const SimOptions& opts) {
    validate_grid(n_particles, n_steps, n_dates);
    if (!model.drift_kernel || !model.diff_kernel)
        throw std::invalid_argument("simulate_particles: model kernels not set");
    if (!opts.stream_ids.empty() &&
        opts.stream_ids.size() != static_cast<std::size_t>(n_particles))
        throw std::invalid_argument("simulate_particles: stream_ids size mismatch");
    const int d = model.dim;
    const int m = model.brownian_dim;
    if (static_cast<int>(model.initial_state.size()) != d)
        throw std::invalid_argument("simulate_particles: initial_state size mismatch");

    ParticlePaths p = make_paths(n_particles, n_steps, d, n_dates, model.horizon, seed,
                                 CouplingTag::particle_system);
    for (int i = 0; i < n_particles; ++i)
        for (int l = 0; l < d; ++l)
            p.states[(static_cast<std::size_t>(i) * (n_steps + 1)) * d + l] =
                model.initial_state[static_cast<std::size_t>(l)];

    const rng::NormalField noise(seed, kParticlePurpose);
    const double dt = model.horizon / n_steps;
    const double sqdt = std::sqrt(dt);
    std::vector<double> scratch;
    std::vector<double> mean(static_cast<std::size_t>(d));
    std::vector<int> bad(static_cast<std::size_t>(n_particles), -1);

    for (int k = 0; k < n_steps; ++k) {
        step_mean(p.states, n_particles, n_steps, d, k, scratch, mean.data());
        for (int l = 0; l < d; ++l)
            p.step_means[static_cast<std::size_t>(k) * d + l] = mean[static_cast<std::size_t>(l)];

        auto advance = [&](std::size_t lo, std::size_t hi) {
            std::vector<double> drift(static_cast<std::size_t>(d));
            std::vector<double> diff(static_cast<std::size_t>(d) * m);
            std::vector<double> acc_drift(static_cast<std::size_t>(d));
            std::vector<double> acc_diff(static_cast<std::size_t>(d) * m);
            for (std::size_t i = lo; i < hi; ++i) {
                const auto x = p.state_at(static_cast<int>(i), k);
                if (model.kernels_affine_in_y) {
                    model.drift_kernel(x, mean, drift);
                    model.diff_kernel(x, mean, diff);
                } else {
                    std::fill(drift.begin(), drift.end(), 0.0);
                    std::fill(diff.begin(), diff.end(), 0.0);
                    for (int j = 0; j < n_particles; ++j) {
                        const auto y = p.state_at(j, k);
                        model.drift_kernel(x, y, acc_drift);
                        model.diff_kernel(x, y, acc_diff);
                        for (int l = 0; l < d; ++l) drift[static_cast<std::size_t>(l)] += acc_drift[static_cast<std::size_t>(l)];
                        for (std::size_t q = 0; q < diff.size(); ++q) diff[q] += acc_diff[q];
                    }
                    for (double& v : drift) v /= n_particles;
                    for (double& v : diff) v /= n_particles;
                }
                const std::uint64_t stream = stream_of(opts, static_cast<int>(i));
                double* next = &p.states[(i * (n_steps + 1) + k + 1) * d];
                for (int l = 0; l < d; ++l) {
                    double dx = drift[static_cast<std::size_t>(l)] * dt;
                    for (int mm = 0; mm < m; ++mm) {
                        const double g = noise.normal(
                            stream, static_cast<std::uint64_t>(k) * m + mm);
                        dx += diff[static_cast<std::size_t>(l) * m + mm] * sqdt * g;
                    }
                    const double v = x[static_cast<std::size_t>(l)] + dx;
                    if (!std::isfinite(v)) bad[i] = k;
                    next[l] = v;
                }
            }
        };
        parallel_for(static_cast<std::size_t>(n_particles), opts.workers, advance);

        for (int i = 0; i < n_particles; ++i) {
            if (bad[static_cast<std::size_t>(i)] >= 0)
                throw NonFiniteStateError("simulate_particles: non-finite state at step " +
                                              std::to_string(k + 1) + ", particle " +
                                              std::to_string(i),
                                          k + 1, i);
        }
    }
    step_mean(p.states, n_particles, n_steps, d, n_steps, scratch, mean.data());
    for (int l = 0; l < d; ++l)
        p.step_means[static_cast<std::size_t>(n_steps) * d + l] = mean[static_cast<std::size_t>(l)];
    return p;
}

ParticlePaths simulate_coupled_exact(const ShimizuYamadaParams& params, int n_particles,
                                     int n_steps, int n_dates, std::uint64_t seed,
                                     double horizon, const SimOptions& opts) {
    validate_grid(n_particles, n_steps, n_dates);
    if (!(params.a > 0.0)) throw std::invalid_argument("simulate_coupled_exact: a must be > 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate_coupled_exact: horizon must be > 0");
    if (!opts.stream_ids.empty() &&
        opts.stream_ids.size() != static_cast<std::size_t>(n_particles))
        throw std::invalid_argument("simulate_coupled_exact: stream_ids size mismatch");
    ParticlePaths p = make_paths(n_particles, n_steps, 1, n_dates, horizon, seed,
                                 CouplingTag::exact_limit);
    const rng::NormalField noise(seed, kParticlePurpose);
    const double dt = horizon / n_steps;
    // One-step transition is time homogeneous on the equidistant grid.
    const double decay = -std::expm1(-params.a * dt);  // 1 - e^{-a dt}
    const double sd =
        params.sigma * std::sqrt((-std::expm1(-2.0 * params.a * dt)) / (2.0 * params.a));

    auto advance = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint64_t stream = stream_of(opts, static_cast<int>(i));
            double x = params.x0;
            p.states[i * (n_steps + 1)] = x;
            for (int k = 0; k < n_steps; ++k) {
                const double g = noise.normal(stream, static_cast<std::uint64_t>(k));
                x = x + (params.x0 - x) * decay + sd * g;
                p.states[i * (n_steps + 1) + k + 1] = x;
            }
        }
    };
    parallel_for(static_cast<std::size_t>(n_particles), opts.workers, advance);

    std::vector<double> scratch;
    double mean = 0.0;
    for (int k = 0; k <= n_steps; ++k) {
        step_mean(p.states, n_particles, n_steps, 1, k, scratch, &mean);
        p.step_means[static_cast<std::size_t>(k)] = mean;
    }
    return p;
}

ParticlePaths simulate_coupled_euler_limit(const ShimizuYamadaParams& params, int n_particles,
                                           int n_steps, int n_dates, std::uint64_t seed,
                                           double horizon, const SimOptions& opts) {
    validate_grid(n_particles, n_steps, n_dates);
    if (!(params.a > 0.0))
        throw std::invalid_argument("simulate_coupled_euler_limit: a must be > 0");
    if (!(horizon > 0.0))
        throw std::invalid_argument("simulate_coupled_euler_limit: horizon must be > 0");
    if (!opts.stream_ids.empty() &&
        opts.stream_ids.size() != static_cast<std::size_t>(n_particles))
        throw std::invalid_argument("simulate_coupled_euler_limit: stream_ids size mismatch");
    ParticlePaths p = make_paths(n_particles, n_steps, 1, n_dates, horizon, seed,
                                 CouplingTag::euler_limit);
    const rng::NormalField noise(seed, kParticlePurpose);
    const double dt = horizon / n_steps;
    const double sqdt = std::sqrt(dt);

    auto advance = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint64_t stream = stream_of(opts, static_cast<int>(i));
            double x = params.x0;
            p.states[i * (n_steps + 1)] = x;
            for (int k = 0; k < n_steps; ++k) {
                const double g = noise.normal(stream, static_cast<std::uint64_t>(k));
                x = x + params.a * (params.x0 - x) * dt + params.sigma * sqdt * g;
                p.states[i * (n_steps + 1) + k + 1] = x;
            }
        }
    };
    parallel_for(static_cast<std::size_t>(n_particles), opts.workers, advance);

    std::vector<double> scratch;
    double mean = 0.0;
    for (int k = 0; k <= n_steps; ++k) {
        step_mean(p.states, n_particles, n_steps, 1, k, scratch, &mean);
        p.step_means[static_cast<std::size_t>(k)] = mean;
    }
    return p;
}

namespace {

// Mean over particles of sup_k |X_i(k) - Y_i(k)|^p (Euclidean over dims).
double sup_error_moment(const ParticlePaths& a, const ParticlePaths& b, int p) {
    std::vector<double> per_particle(static_cast<std::size_t>(a.n_particles));
    for (int i = 0; i < a.n_particles; ++i) {
        double sup = 0.0;
        for (int k = 0; k <= a.n_steps; ++k) {
            double nrm = 0.0;
            for (int l = 0; l < a.dim; ++l) {
                const double dlt = a.state(i, k, l) - b.state(i, k, l);
                nrm += dlt * dlt;
            }
            sup = std::max(sup, std::sqrt(nrm));
        }
        per_particle[static_cast<std::size_t>(i)] = std::pow(sup, p);
    }
    return pairwise_sum(per_particle) / a.n_particles;
}

RateReport finish_rate_report(std::vector<double> sizes, std::vector<double> errors, int p) {
    RateReport r;
    r.sizes = std::move(sizes);
    r.errors = std::move(errors);
    r.p = p;
    double max_err = 0.0;
    for (double e : r.errors) max_err = std::max(max_err, e);
    if (max_err <= 1e-14) {
        r.degenerate = true;
        return r;
    }
    std::vector<double> lx(r.sizes.size()), ly(r.sizes.size());
    for (std::size_t i = 0; i < r.sizes.size(); ++i) {
        lx[i] = std::log(r.sizes[i]);
        ly[i] = std::log(r.errors[i]);
    }
    const LineFit f = fit_line(lx, ly);
    r.slope = f.slope;
    r.r_squared = f.r_squared;
    return r;
}

}  // namespace

RateReport chaos_rate(const ShimizuYamadaParams& params, const std::vector<int>& n_list, int p,
                      int n_steps, const std::vector<std::uint64_t>& seeds,
                      const SimOptions& opts, ChaosReference reference) {
    if (n_list.size() < 4) throw std::invalid_argument("chaos_rate: need >= 4 sizes");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("chaos_rate: sizes must be strictly increasing");
    if (n_list.back() < 10 * n_list.front())
        throw std::invalid_argument("chaos_rate: sizes must span at least one decade");
    if (seeds.empty()) throw std::invalid_argument("chaos_rate: need at least one seed");
    if (p < 1) throw std::invalid_argument("chaos_rate: moment order must be >= 1");

    const ModelSpec model = sy_model(params);
    std::vector<double> sizes, errors;
    for (int n : n_list) {
        std::vector<double> per_seed(seeds.size());
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            const ParticlePaths sys = simulate_particles(model, n, n_steps, 1, seeds[s], opts);
            const ParticlePaths ref =
                (reference == ChaosReference::exact_limit)
                    ? simulate_coupled_exact(params, n, n_steps, 1, seeds[s], model.horizon, opts)
                    : simulate_coupled_euler_limit(params, n, n_steps, 1, seeds[s], model.horizon,
                                                   opts);
            per_seed[s] = sup_error_moment(sys, ref, p);
        }
        sizes.push_back(static_cast<double>(n));
        errors.push_back(std::pow(pairwise_sum(per_seed) / per_seed.size(), 1.0 / p));
    }
    return finish_rate_report(std::move(sizes), std::move(errors), p);
}

RateReport euler_rate(const ModelSpec& model, const std::vector<double>& deltas,
                      int n_particles, int p, const std::vector<std::uint64_t>& seeds,
                      const SimOptions& opts) {
    (void)opts;  // runs are small; kept for interface symmetry
    if (deltas.size() < 4) throw std::invalid_argument("euler_rate: need >= 4 deltas");
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (deltas[i] <= deltas[i - 1])
            throw std::invalid_argument("euler_rate: deltas must be strictly increasing");
    if (seeds.empty()) throw std::invalid_argument("euler_rate: need at least one seed");
    if (n_particles < 1) throw std::invalid_argument("euler_rate: n_particles must be >= 1");
    if (model.dim != 1 || model.brownian_dim != 1)
        throw std::invalid_argument("euler_rate: implemented for d = m = 1 models");

    const double horizon = model.horizon;
    std::vector<int> coarse_steps;
    for (double dg : deltas) {
        const double steps = horizon / dg;
        const int k = static_cast<int>(std::lround(steps));
        if (k < 1 || std::abs(steps - k) > 1e-9)
            throw std::invalid_argument("euler_rate: horizon must be an integer multiple of each delta");
        coarse_steps.push_back(k);
    }
    // Deltas ascend, so the first entry is the smallest delta; the reference
    // grid is 2x finer than that.
    const int ref_steps = 2 * coarse_steps.front();
    for (int k : coarse_steps)
        if (ref_steps % k != 0)
            throw std::invalid_argument("euler_rate: each delta grid must nest in the reference grid");

    const double x0 = model.initial_state.at(0);

    // Simulates the system on a grid of `steps` using the given per-step
    // Brownian increments dw[i * steps + c]; returns states [i][0..steps].
    auto run_system = [&](int steps, const std::vector<double>& dw) {
        const double dt = horizon / steps;
        std::vector<double> st(static_cast<std::size_t>(n_particles) * (steps + 1));
        for (int i = 0; i < n_particles; ++i) st[static_cast<std::size_t>(i) * (steps + 1)] = x0;
        std::vector<double> dev(static_cast<std::size_t>(n_particles));
        std::vector<double> xv(1), yv(1), av(1), bv(1);
        for (int c = 0; c < steps; ++c) {
            const double ref = st[static_cast<std::size_t>(0) * (steps + 1) + c];
            for (int i = 0; i < n_particles; ++i)
                dev[static_cast<std::size_t>(i)] =
                    st[static_cast<std::size_t>(i) * (steps + 1) + c] - ref;
            const double mean = ref + pairwise_sum(dev) / n_particles;
            yv[0] = mean;
            for (int i = 0; i < n_particles; ++i) {
                const double x = st[static_cast<std::size_t>(i) * (steps + 1) + c];
                xv[0] = x;
                double drift, diffu;
                if (model.kernels_affine_in_y) {
                    model.drift_kernel(xv, yv, av);
                    model.diff_kernel(xv, yv, bv);
                    drift = av[0];
                    diffu = bv[0];
                } else {
                    drift = 0.0;
                    diffu = 0.0;
                    std::vector<double> yj(1);
                    for (int j = 0; j < n_particles; ++j) {
                        yj[0] = st[static_cast<std::size_t>(j) * (steps + 1) + c];
                        model.drift_kernel(xv, yj, av);
                        model.diff_kernel(xv, yj, bv);
                        drift += av[0];
                        diffu += bv[0];
                    }
                    drift /= n_particles;
                    diffu /= n_particles;
                }
                const double v = x + drift * dt + diffu * dw[static_cast<std::size_t>(i) * steps + c];
                if (!std::isfinite(v))
                    throw NonFiniteStateError("euler_rate: non-finite state", c + 1, i);
                st[static_cast<std::size_t>(i) * (steps + 1) + c + 1] = v;
            }
        }
        return st;
    };

    std::vector<std::vector<double>> per_delta_moments(deltas.size());
    for (std::uint64_t seed : seeds) {
        const rng::NormalField field(seed, kParticlePurpose);
        const double dt_ref = horizon / ref_steps;
        const double sq_ref = std::sqrt(dt_ref);
        std::vector<double> dw_ref(static_cast<std::size_t>(n_particles) * ref_steps);
        for (int i = 0; i < n_particles; ++i)
            for (int f = 0; f < ref_steps; ++f)
                dw_ref[static_cast<std::size_t>(i) * ref_steps + f] =
                    sq_ref * field.normal(static_cast<std::uint64_t>(i),
                                          static_cast<std::uint64_t>(f));

        const std::vector<double> ref = run_system(ref_steps, dw_ref);

        for (std::size_t di = 0; di < deltas.size(); ++di) {
            const int steps = coarse_steps[di];
            const int sub = ref_steps / steps;
            std::vector<double> dw(static_cast<std::size_t>(n_particles) * steps, 0.0);
            for (int i = 0; i < n_particles; ++i)
                for (int c = 0; c < steps; ++c) {
                    double acc = 0.0;
                    for (int f = 0; f < sub; ++f)
                        acc += dw_ref[static_cast<std::size_t>(i) * ref_steps + c * sub + f];
                    dw[static_cast<std::size_t>(i) * steps + c] = acc;
                }
            const std::vector<double> coarse = run_system(steps, dw);

            std::vector<double> per_particle(static_cast<std::size_t>(n_particles));
            for (int i = 0; i < n_particles; ++i) {
                double sup = 0.0;
                for (int c = 0; c <= steps; ++c) {
                    const double xc = coarse[static_cast<std::size_t>(i) * (steps + 1) + c];
                    const double xr = ref[static_cast<std::size_t>(i) * (ref_steps + 1) + c * sub];
                    sup = std::max(sup, std::abs(xc - xr));
                }
                per_particle[static_cast<std::size_t>(i)] = std::pow(sup, p);
            }
            per_delta_moments[di].push_back(pairwise_sum(per_particle) / n_particles);
        }
    }

    std::vector<double> sizes(deltas.begin(), deltas.end());
    std::vector<double> errors(deltas.size());
    for (std::size_t di = 0; di < deltas.size(); ++di)
        errors[di] = std::pow(
            pairwise_sum(per_delta_moments[di]) / per_delta_moments[di].size(), 1.0 / p);
    return finish_rate_report(std::move(sizes), std::move(errors), p);
}

void write_paths_csv(const ParticlePaths& paths, const std::string& csv_path,
                     const std::string& sidecar_path, const std::string& model_note) {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("write_paths_csv: cannot open " + csv_path);
    csv << "particle,step,time";
    for (int l = 0; l < paths.dim; ++l) csv << ",x" << l;
    csv << "\n";
    char buf[64];
    for (int i = 0; i < paths.n_particles; ++i) {
        for (int k = 0; k <= paths.n_steps; ++k) {
            csv << i << ',' << k;
            std::snprintf(buf, sizeof buf, ",%.17g", paths.times[static_cast<std::size_t>(k)]);
            csv << buf;
            for (int l = 0; l < paths.dim; ++l) {
                std::snprintf(buf, sizeof buf, ",%.17g", paths.state(i, k, l));
                csv << buf;
            }
            csv << "\n";
        }
    }

    nlohmann::json side;
    side["seed"] = paths.seed;
    side["coupling"] = to_string(paths.coupling_tag);
    side["n_particles"] = paths.n_particles;
    side["n_steps"] = paths.n_steps;
    side["dim"] = paths.dim;
    side["num_dates"] = paths.num_dates;
    side["horizon"] = paths.times.back();
    if (!model_note.empty()) side["model"] = model_note;
    std::ofstream sj(sidecar_path, std::ios::binary);
    if (!sj) throw std::runtime_error("write_paths_csv: cannot open " + sidecar_path);
    sj << side.dump(2) << "\n";
}

}  // namespace mvstop
