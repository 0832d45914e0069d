// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mvstop {

// Invalid experiment configuration; message carries the offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Least-squares design is (numerically) rank deficient.
class SingularFitError : public std::runtime_error {
public:
    SingularFitError(const std::string& msg, double lambda_min)
        : std::runtime_error(msg), lambda_min(lambda_min) {}
    double lambda_min;
};

// A simulated state became NaN/Inf; reports where.
class NonFiniteStateError : public std::runtime_error {
public:
    NonFiniteStateError(const std::string& msg, int step, int particle)
        : std::runtime_error(msg), step(step), particle(particle) {}
    int step;
    int particle;
};

// Oracle grid does not contain enough probability mass of the state law.
class GridTooNarrowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mvstop
