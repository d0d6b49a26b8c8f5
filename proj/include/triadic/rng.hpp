#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace triadic {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of an independent stream derived from a base seed, so that ensemble
/// member k gets the same numbers regardless of scheduling.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// 64-bit Mersenne Twister with the handful of draws the simulators need.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    double normal() { return normal_(engine_); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace triadic
