// rng.hpp - Counter-based random number substreams for reproducible trials.
//
// Each Monte Carlo trial gets its own stream keyed by (global seed, trial
// index), so serial and parallel runs produce bit-identical draws no matter
// how trials are scheduled across threads.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace ddf {

namespace detail {

// splitmix64 output mix (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// One independent stream per (seed, stream_id) pair. Stateless apart from a
// counter: the n-th output is a pure function of (seed, stream_id, n).
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream_id)
        : state_(detail::mix64(seed ^ detail::mix64(stream_id))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1]: never returns 0, so log() below is safe.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal pair via Box-Muller (fixed consumption: two uniforms).
    void next_normal_pair(double& z0, double& z1) {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        z0 = r * std::cos(phi);
        z1 = r * std::sin(phi);
    }

    // Circularly symmetric complex Gaussian, zero mean, unit total variance
    // (0.5 per real dimension).
    std::complex<double> next_cn01() {
        double re, im;
        next_normal_pair(re, im);
        constexpr double inv_sqrt2 = 0.7071067811865475244;
        return {re * inv_sqrt2, im * inv_sqrt2};
    }

private:
    std::uint64_t state_;
};

}  // namespace ddf
