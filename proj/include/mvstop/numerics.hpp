// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deterministic reductions and a small parallel-for helper. All Monte Carlo
// means in the library go through pairwise_sum over a canonical index order,
// so results do not depend on the worker count (MVSTOP_WORKERS).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mvstop {

// Pairwise (cascade) summation over the given order.
double pairwise_sum(std::span<const double> xs);

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;   // unbiased sample variance
    double se = 0.0;    // standard error of the mean
    std::size_t n = 0;
};

MeanVar mean_var(std::span<const double> xs);

double median(std::vector<double> xs);  // by value: sorts a copy

// Least-squares line fit y = intercept + slope * x with coefficient of
// determination; used for log-log rate fits.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Worker count taken from MVSTOP_WORKERS (default 1). The count only
// affects scheduling; all outputs are invariant to it.
int env_worker_count();

// Runs fn(begin, end) over a partition of [0, n). Chunks are contiguous and
// written-to slots must be disjoint per index.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace mvstop
