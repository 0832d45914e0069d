// SPDX-License-Identifier: Apache-2.0
#pragma once

// Euler simulation of the interacting particle system, coupled limit paths
// on shared Brownian increments, and the chaos / Euler-step rate studies.

#include "mvstop/model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mvstop {

enum class CouplingTag { particle_system, exact_limit, euler_limit };

const char* to_string(CouplingTag tag);

// RNG provenance: the Gaussian increment used by particle `stream` at grid
// step `counter` (times brownian_dim, plus the component) under a given
// master seed. Simulators consume exactly these values.
double particle_increment_normal(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter);

struct SimOptions {
    int workers = -1;  // -1: MVSTOP_WORKERS (results never depend on it)
    // Optional per-particle RNG stream assignment (default: identity).
    std::vector<std::uint64_t> stream_ids;
};

struct ParticlePaths {
    int n_particles = 0;
    int n_steps = 0;  // Euler grid steps
    int dim = 1;
    int num_dates = 1;  // J; exercise dates j=0..J live on the grid
    std::vector<double> times;       // n_steps + 1 grid times, 0..horizon
    std::vector<double> states;      // [particle][step][dim], row-major
    std::vector<double> step_means;  // [step][dim] cross-particle means
    std::uint64_t seed = 0;
    CouplingTag coupling_tag = CouplingTag::particle_system;

    double state(int i, int k, int l = 0) const {
        return states[(static_cast<std::size_t>(i) * (n_steps + 1) + k) * dim + l];
    }
    std::span<const double> state_at(int i, int k) const {
        return {&states[(static_cast<std::size_t>(i) * (n_steps + 1) + k) * dim],
                static_cast<std::size_t>(dim)};
    }
    std::span<const double> mean_at(int k) const {
        return {&step_means[static_cast<std::size_t>(k) * dim], static_cast<std::size_t>(dim)};
    }
    int steps_per_date() const { return n_steps / num_dates; }
    int exercise_index(int j) const { return j * steps_per_date(); }
    std::span<const double> date_state(int i, int j) const {
        return state_at(i, exercise_index(j));
    }
};

// Euler-Maruyama on an equidistant grid. Each particle's drift/diffusion
// uses the empirical average over all N particles at that step; increments
// for particle i come from the counter-based stream derived from (seed, i).
// Requires n_steps divisible by n_dates so exercise dates land on the grid.
ParticlePaths simulate_particles(const ModelSpec& model, int n_particles, int n_steps,
                                 int n_dates, std::uint64_t seed, const SimOptions& opts = {});

// I.i.d. exact-solution paths of the limit process driven by the SAME
// per-particle increment streams as simulate_particles(seed); enables the
// pathwise difference X^{i,N} - X^i. Shimizu-Yamada only.
ParticlePaths simulate_coupled_exact(const ShimizuYamadaParams& params, int n_particles,
                                     int n_steps, int n_dates, std::uint64_t seed,
                                     double horizon = 1.0, const SimOptions& opts = {});

// Euler discretization of the limit SDE dX = a(x0 - X)dt + sigma dW on the
// same increments; same discretization error structure as the particle runs.
ParticlePaths simulate_coupled_euler_limit(const ShimizuYamadaParams& params, int n_particles,
                                           int n_steps, int n_dates, std::uint64_t seed,
                                           double horizon = 1.0, const SimOptions& opts = {});

struct RateReport {
    std::vector<double> sizes;   // N values (chaos) or delta values (euler)
    std::vector<double> errors;  // L^p sup-error estimates
    double slope = 0.0;
    double r_squared = 0.0;
    int p = 2;
    bool degenerate = false;  // all errors ~ 0 (e.g. sigma = 0)
};

enum class ChaosReference { exact_limit, euler_limit };

// Monte Carlo estimate of || sup_t |X^{.,N} - X^.| ||_p against N; the
// log-log slope should sit near -1/2.
RateReport chaos_rate(const ShimizuYamadaParams& params, const std::vector<int>& n_list, int p,
                      int n_steps, const std::vector<std::uint64_t>& seeds,
                      const SimOptions& opts = {},
                      ChaosReference reference = ChaosReference::exact_limit);

// || sup_t |X^{.,N,delta} - X^{.,N}| ||_p against the Euler step delta, with
// the reference being a 2x-finer Euler run on shared increments; the slope
// should sit near +1/2 for state-dependent diffusion.
RateReport euler_rate(const ModelSpec& model, const std::vector<double>& deltas,
                      int n_particles, int p, const std::vector<std::uint64_t>& seeds,
                      const SimOptions& opts = {});

// Debug dump: CSV matrix [particle, step, time, x...] plus a JSON sidecar
// carrying seed / grid / coupling provenance.
void write_paths_csv(const ParticlePaths& paths, const std::string& csv_path,
                     const std::string& sidecar_path, const std::string& model_note = "");

}  // namespace mvstop
