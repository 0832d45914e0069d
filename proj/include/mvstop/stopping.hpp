// SPDX-License-Identifier: Apache-2.0
#pragma once

// Backward dynamic programming over exercise dates: regression of realized
// cash flows on particle states (PRMC), the value-regression variant (TvR),
// an independent-batch mode, low-biased policy evaluation on fresh paths,
// and dual upper bounds by nested one-step simulation.

#include "mvstop/basis.hpp"
#include "mvstop/model.hpp"
#include "mvstop/particles.hpp"
#include "mvstop/regression.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvstop {

enum class PolicyMode { prmc_ls, tvr, prmc_independent_batches };

const char* to_string(PolicyMode mode);

// Seed derivation tag for the per-date batches of the independent-batch
// mode: batch j runs on derive(seed, kBatchSeedPurpose, j).
inline constexpr std::uint64_t kBatchSeedPurpose = 0x62617463ull;

struct TrainOptions {
    // < 0: auto (per date, max |cash flow| at that date); 0: off; > 0: fixed.
    double truncation = -1.0;
    bool itm_filter = false;  // regress on in-the-money paths only
    FitOptions fit{.allow_ridge = true};  // induction must not abort at small N
};

struct Policy {
    PolicyMode mode = PolicyMode::prmc_ls;
    int num_dates = 1;  // J
    double truncation_input = -1.0;
    // Per regression date j = 1..J-1 (continuation at J is identically 0):
    std::vector<double> truncation_levels;          // resolved; 0 disables
    std::vector<std::vector<double>> coefficients;  // R^K each
    std::vector<BasisSet> bases;
    std::vector<FitReport> fits;
    BasisDescriptor basis_descriptor;

    // Truncated fitted continuation estimate; j == J returns 0.
    double continuation(int date, std::span<const double> x) const;
    // Smallest j in 1..J with g_j(x_j) >= continuation_j(x_j).
    int stopping_date(const RewardSpec& rewards, const ParticlePaths& paths, int path) const;
};

Policy prmc_backward(const ParticlePaths& paths, const RewardSpec& rewards,
                     const BasisFamily& basis, const TrainOptions& options = {});

// Regresses max(g_{j+1}, truncated C_{j+1}) instead of realized cash flows.
Policy tvr_backward(const ParticlePaths& paths, const RewardSpec& rewards,
                    const BasisFamily& basis, const TrainOptions& options = {});

// J-1 independent particle systems; the date-j regression uses batch j, with
// cash flows generated by applying the already-fitted later rules forward
// along batch j's own paths.
Policy prmc_independent_batches(const ModelSpec& model, const RewardSpec& rewards,
                                const BasisFamily& basis, int n_per_batch, int n_steps,
                                std::uint64_t seed, const TrainOptions& options = {},
                                const SimOptions& sim = {});

struct LowerEstimate {
    double value = 0.0;
    double se = 0.0;
    int n_test = 0;
};

struct UpperEstimate {
    double value = 0.0;
    double se = 0.0;
    int n_test = 0;
    int n_inner = 0;
};

struct BoundsEstimate {
    double lower = 0.0, lower_se = 0.0;
    double upper = 0.0, upper_se = 0.0;
    int n_test = 0, n_inner = 0;
};

// Mean discounted payoff of the policy's stopping rule over fresh paths.
LowerEstimate evaluate_lower(const Policy& policy, const RewardSpec& rewards,
                             const ParticlePaths& test_paths, int workers = -1);

// Convenience: simulates a fresh particle system first.
LowerEstimate evaluate_lower_fresh(const Policy& policy, const ModelSpec& model,
                                   const RewardSpec& rewards, int n_test, int n_steps,
                                   std::uint64_t seed, const SimOptions& sim = {});

// Dual martingale bound: M_j = M_{j-1} + V(Z_j) - (1/N_in) sum V(Z'_j) with
// V = max(g, truncated continuation) and Z'_j one-step inner samples from
// Z_{j-1}; returns the mean of max_j (g_j - M_j) over test paths. Inner
// sampling uses the exact conditional law when the model carries it, else
// Euler substeps against the frozen mean flow of `frozen_flow` (defaults to
// the test paths' own recorded means).
UpperEstimate evaluate_dual_upper(const Policy& policy, const ModelSpec& model,
                                  const RewardSpec& rewards, const ParticlePaths& test_paths,
                                  int n_inner, std::uint64_t seed,
                                  const ParticlePaths* frozen_flow = nullptr, int workers = -1);

// One table cell: lower and dual upper on the same test paths.
BoundsEstimate evaluate_bounds(const Policy& policy, const ModelSpec& model,
                               const RewardSpec& rewards, const ParticlePaths& test_paths,
                               int n_inner, std::uint64_t seed,
                               const ParticlePaths* frozen_flow = nullptr, int workers = -1);

// "lower(se)" with four decimals, the table cell format.
std::string format_cell(double value, double se);

// Policy JSON: mode, truncation, basis descriptor, per-date coefficients and
// Gram eigenvalue extremes. policy_from_json rebuilds the evaluable policy
// against the provided basis family (checked against the descriptor).
std::string policy_to_json(const Policy& policy);
Policy policy_from_json(const std::string& text, const BasisFamily& basis);

}  // namespace mvstop
