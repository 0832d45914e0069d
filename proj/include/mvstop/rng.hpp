// SPDX-License-Identifier: Apache-2.0
#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (key, stream, counter), so simulations are reproducible bit-for-bit
// regardless of thread count or evaluation order.

#include <cmath>
#include <cstdint>

namespace mvstop::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic sub-seed derivation, e.g. per purpose / cell / batch.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
    return mix(seed ^ mix(tag));
}
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive(derive(seed, a), b);
}

// Uniform double in the open interval (0,1).
inline double to_unit(std::uint64_t z) {
    return static_cast<double>(z >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Inverse of the standard normal CDF (Acklam's rational approximation
// followed by one Halley step on erfc), accurate to ~1e-15.
double inverse_normal_cdf(double p);

// A keyed field of i.i.d. draws indexed by (stream, counter).
class NormalField {
public:
    explicit NormalField(std::uint64_t seed, std::uint64_t purpose = 0)
        : key_(derive(seed, purpose)) {}

    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
        return mix(mix(key_ + kGolden * stream) + counter);
    }
    double uniform(std::uint64_t stream, std::uint64_t counter) const {
        return to_unit(bits(stream, counter));
    }
    double normal(std::uint64_t stream, std::uint64_t counter) const {
        return inverse_normal_cdf(uniform(stream, counter));
    }

private:
    std::uint64_t key_;
};

}  // namespace mvstop::rng
